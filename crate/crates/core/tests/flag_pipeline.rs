use std::collections::HashMap;

use flagcalc_core::catalog::{
    abelian_structure, coordinate_structure, full_report, su2_conjugation, su2_family, SU2FamilyParams, CONTACT,
    FIBER, SCALE, Z1, Z2,
};
use flagcalc_core::flag::{
    check_cr_reality, ConjugationSpec, CurvatureReport, PseudoFlagStructure,
};
use flagcalc_core::{Error, Form, FrameBuilder, RelationSet, Scalar};

fn v(name: &str) -> Scalar {
    Scalar::var(name)
}

fn q(p: i64, d: i64) -> Scalar {
    Scalar::ratio(p, d)
}

fn su2() -> (PseudoFlagStructure, CurvatureReport) {
    let p = su2_family(&SU2FamilyParams::symbolic_xyz()).unwrap();
    let r = full_report(&p).unwrap();
    (p, r)
}

fn same(a: &Scalar, b: &Scalar, rel: &RelationSet) -> bool {
    a.equals(b, rel).unwrap()
}

#[test]
fn su2_normalized_forms() {
    let (_, rep) = su2();
    let r = &rep.reduction;
    let (x, y, z, a) = (v("x"), v("y"), v("z"), v(SCALE));
    let theta11 = (-&r.lambda).try_sub(&r.theta.scale(&x)).unwrap();
    let tau1 = r.theta2.scale(&(&y * &a.pow(2).unwrap()));
    let tau2 = r.theta1.scale(&(&z * &a.pow(-2).unwrap()));
    assert!(r.theta11.equals(&theta11).unwrap());
    assert!(r.tau1.equals(&tau1).unwrap());
    assert!(r.tau2.equals(&tau2).unwrap());
}

#[test]
fn abelian_structure_is_flat_and_trivial() {
    let p = abelian_structure().unwrap();
    let rep = full_report(&p).unwrap();
    assert!(rep.reduction.theta11.equals(&-&rep.reduction.lambda).unwrap());
    assert!(rep.reduction.tau1.is_zero().unwrap());
    assert!(rep.reduction.tau2.is_zero().unwrap());
    for (name, value) in rep.coefficients.named() {
        assert!(value.is_trivially_zero(), "{name} = {value}");
    }
    let c = &rep.embedding.connection;
    for f in [&c.phi1, &c.phi2, &c.psi] {
        assert!(f.is_zero().unwrap());
    }
    assert!(rep.flat);
    assert!(rep.integrand.form.is_zero().unwrap());
}

#[test]
fn su2_coefficients() {
    let (p, rep) = su2();
    let rel = p.frame().relations();
    let k = &rep.coefficients;
    let (x, y, z, a) = (v("x"), v("y"), v("z"), v(SCALE));
    assert!(same(&k.r, &-&x, rel));
    assert!(k.w1.is_trivially_zero() && k.w2.is_trivially_zero());
    assert!(same(&k.s1_1, &(&y * &z), rel));
    assert!(same(&k.s2_2, &(&y * &z), rel));
    assert!(same(&k.s1_2, &(&(&Scalar::from_int(-2) * &a.pow(2).unwrap()) * &(&x * &y)), rel));
    assert!(same(&k.s2_1, &(&(&Scalar::from_int(2) * &(&x * &z)) * &a.pow(-2).unwrap()), rel));
}

#[test]
fn su2_embedding() {
    let (p, rep) = su2();
    let rel = p.frame().relations();
    let e = &rep.embedding;
    let (x, y, z) = (v("x"), v("y"), v("z"));
    assert!(same(&e.c, &(&q(1, 4) * &x), rel));
    assert!(e.e1.is_trivially_zero() && e.e2.is_trivially_zero());
    let g = &(&Scalar::from_int(-2) * &(&y * &z)) - &(&q(1, 8) * &(&x * &x));
    assert!(same(&e.g, &g, rel));
    assert!(same(&e.g_alt, &g, rel));
    // θ₁¹ + cθ with θ₁¹ = −λ − xθ and c = x/4.
    let r = &rep.reduction;
    let omega11 = (-&r.lambda).try_sub(&r.theta.scale(&(&q(3, 4) * &x))).unwrap();
    assert!(e.connection.omega11.equals(&omega11).unwrap());
}

#[test]
fn su2_structure_equations_and_first_curvature() {
    let (_, rep) = su2();
    assert!(rep.structure.passed(), "{}", rep.structure);
    assert_eq!(rep.structure.residuals.len(), 5);
    let r = &rep.reduction;
    let expected = r
        .theta
        .wedge(&r.theta2)
        .scale(&(&q(-3, 2) * &(&(&v("x") * &v("y")) * &v(SCALE).pow(2).unwrap())));
    assert!(rep.invariants.phi1.equals(&expected).unwrap());
}

#[test]
fn su2_invariants() {
    let (p, rep) = su2();
    let rel = p.frame().relations();
    let i = &rep.invariants;
    let (x, y, z, a) = (v("x"), v("y"), v("z"), v(SCALE));
    assert!(same(&i.q1, &(&q(-3, 2) * &(&(&x * &y) * &a.pow(2).unwrap())), rel));
    assert!(same(&i.q2, &(&q(3, 2) * &(&(&x * &z) * &a.pow(-2).unwrap())), rel));
    assert!(i.u1.is_trivially_zero() && i.u2.is_trivially_zero());
    assert!(!rep.flat);
}

#[test]
fn su2_bianchi_coefficients() {
    let (p, rep) = su2();
    let rel = p.frame().relations();
    let b = &rep.bianchi;
    assert!(b.passed());
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let a2 = v(SCALE).pow(2).unwrap();
    let am2 = v(SCALE).pow(-2).unwrap();
    let xx = &x * &x;
    // dQ¹ = −3xya²λ and 2Q¹ω₁¹ = 3xya²λ + (9/4)x²ya²θ.
    assert!(same(&b.s1, &(&q(9, 4) * &(&(&xx * &y) * &a2)), rel));
    assert!(b.t1.is_trivially_zero());
    assert!(same(&b.s2, &(&q(9, 4) * &(&(&xx * &z) * &am2)), rel));
    assert!(b.t2.is_trivially_zero());
    assert!(b.a.is_trivially_zero() && b.d.is_trivially_zero());
    // With U₁ = 0 the U₁-line is 2Q²φ¹, φ¹ = (x/4)θ¹ + ya²θ².
    assert!(same(&b.b, &(&q(3, 4) * &(&(&xx * &z) * &am2)), rel));
    assert!(same(&b.c, &(&Scalar::from_int(3) * &(&(&x * &y) * &z)), rel));
    assert!(same(&b.e, &(&q(-3, 4) * &(&(&xx * &y) * &a2)), rel));
}

#[test]
fn su2_integrand() {
    let (p, rep) = su2();
    let rel = p.frame().relations();
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let r = &rep.reduction;
    let coeff = -(&(&Scalar::from_int(2) * &(&y * &z)) + &(&q(1, 2) * &(&x * &x)));
    assert!(same(&rep.integrand.volume_coefficient, &coeff, rel));
    let vol = r.theta.wedge(&r.theta1).wedge(&r.theta2);
    assert!(rep.integrand.base_form.equals(&vol.scale(&coeff)).unwrap());
    // θ₁¹∧(−(R/2)θ¹∧θ²) contributes −(x/2)λ∧θ¹∧θ² before the pullback.
    let extra = r.lambda.wedge(&r.theta1).wedge(&r.theta2).scale(&(&q(-1, 2) * &x));
    assert!(rep.integrand.form.equals(&vol.scale(&coeff).try_add(&extra).unwrap()).unwrap());
    assert_eq!(rep.integrand.transcendental_factor, "1/(8*pi^2)");
}

#[test]
fn flatness_of_specializations() {
    let cases = [
        (Scalar::zero(), v("y"), v("z"), true),
        (v("x"), Scalar::zero(), Scalar::zero(), true),
        (v("x"), v("y"), v("z"), false),
    ];
    for (x, y, z, flat) in cases {
        let p = su2_family(&SU2FamilyParams::Xyz { x, y, z }).unwrap();
        assert_eq!(full_report(&p).unwrap().flat, flat);
    }
}

#[test]
fn x_zero_has_vanishing_r() {
    let p = su2_family(&SU2FamilyParams::Xyz {
        x: Scalar::zero(),
        y: v("y"),
        z: v("z"),
    })
    .unwrap();
    let rep = full_report(&p).unwrap();
    assert!(rep.coefficients.r.is_trivially_zero());
    assert!(rep.reduction.theta11.equals(&-&rep.reduction.lambda).unwrap());
}

#[test]
fn parametrizations_agree() {
    let rs = SU2FamilyParams::symbolic_rs();
    let (x, y, z) = rs.xyz();
    let from_rs = full_report(&su2_family(&rs).unwrap()).unwrap();
    let from_xyz = full_report(&su2_family(&SU2FamilyParams::symbolic_xyz()).unwrap()).unwrap();
    let bind: HashMap<_, _> = [("x", x), ("y", y), ("z", z)]
        .into_iter()
        .map(|(n, s)| (flagcalc_core::Symbol::new(n), s))
        .collect();
    let rel = from_rs.reduction.frame.relations();
    let pairs = [
        (&from_xyz.invariants.q1, &from_rs.invariants.q1),
        (&from_xyz.invariants.q2, &from_rs.invariants.q2),
        (&from_xyz.embedding.g, &from_rs.embedding.g),
        (&from_xyz.integrand.volume_coefficient, &from_rs.integrand.volume_coefficient),
        (&from_xyz.coefficients.s1_2, &from_rs.coefficients.s1_2),
    ];
    for (sym, concrete) in pairs {
        assert!(same(&sym.substitute(&bind).unwrap(), concrete, rel), "{sym} vs {concrete}");
    }
}

#[test]
fn rs_identity_point() {
    let p = SU2FamilyParams::Rs {
        r1: Scalar::one(),
        r2: Scalar::zero(),
        s1: Scalar::zero(),
        s2: Scalar::one(),
    };
    let (x, y, z) = p.xyz();
    assert!(x.is_trivially_zero());
    assert_eq!(y, Scalar::from_int(-1));
    assert_eq!(z, Scalar::one());
    let s = su2_family(&p).unwrap();
    let f = s.frame();
    let expected = f.basis_form(CONTACT).unwrap().wedge(&f.basis_form(Z2).unwrap().scale(&y));
    assert!(f.d_of(Z1).unwrap().equals(&expected).unwrap());
    assert!(full_report(&s).unwrap().flat);
}

#[test]
fn parameters_violating_the_relation_are_rejected() {
    let p = SU2FamilyParams::Xyz {
        x: Scalar::one(),
        y: Scalar::one(),
        z: Scalar::one(),
    };
    assert!(matches!(su2_family(&p), Err(Error::NotAPseudoFlag(_))));
    let p = SU2FamilyParams::Xyz {
        x: v(SCALE),
        y: v("y"),
        z: v("z"),
    };
    assert!(matches!(su2_family(&p), Err(Error::NotSupported(_))));
}

#[test]
fn coordinate_family_runs_end_to_end() {
    let p = coordinate_structure(&v("u"), &(&v("t") * &v("v"))).unwrap();
    let rep = full_report(&p).unwrap();
    assert!(!rep.flat);
    assert!(!rep.coefficients.r0.is_trivially_zero());
}

fn base_builder() -> (FrameBuilder, std::sync::Arc<flagcalc_core::FrameSpace>) {
    let mut b = FrameBuilder::new(&[CONTACT, Z1, Z2, FIBER]).unwrap();
    let sk = b.skeleton().clone();
    b.fiber(SCALE, sk.basis_form(FIBER).unwrap().scale(&v(SCALE))).unwrap();
    (b, sk)
}

fn build(dtheta: Form, dz1: Form) -> flagcalc_core::Result<PseudoFlagStructure> {
    let (mut b, sk) = base_builder();
    b.d(CONTACT, dtheta.rebase(&sk)?)?;
    b.d(Z1, dz1.rebase(&sk)?)?;
    let frame = b.build()?;
    PseudoFlagStructure::new(frame, CONTACT, Z1, Z2, FIBER, SCALE)
}

#[test]
fn invalid_pseudo_flags() {
    let (_, sk) = base_builder();
    let f = |n: &str| sk.basis_form(n).unwrap();
    let zz = f(Z1).wedge(&f(Z2));
    assert_eq!(build(Form::zero(&sk, 2), Form::zero(&sk, 2)).unwrap_err(), Error::DegenerateContact);
    assert!(matches!(
        build(zz.scale(&Scalar::from_int(2)), Form::zero(&sk, 2)),
        Err(Error::NotAPseudoFlag(_))
    ));
    // dZ¹ = θ∧Z² is fine; dZ¹ = Z²∧λ gives a consistent frame but has a λ term.
    assert!(build(zz.clone(), f(CONTACT).wedge(&f(Z2))).is_ok());
    assert!(matches!(build(zz, f(Z2).wedge(&f(FIBER))), Err(Error::NotAPseudoFlag(_))));

    let three = FrameBuilder::new(&[CONTACT, Z1, Z2]).unwrap().build().unwrap();
    assert!(matches!(
        PseudoFlagStructure::new(three, CONTACT, Z1, Z2, FIBER, SCALE),
        Err(Error::NotAPseudoFlag(_))
    ));
}

#[test]
fn su2_is_real() {
    let (p, rep) = su2();
    let spec = su2_conjugation(&p).unwrap();
    let report = check_cr_reality(
        &p,
        &rep.reduction,
        &rep.embedding.connection,
        &rep.invariants,
        &spec,
    )
    .unwrap();
    assert!(report.premise_holds(), "{report:?}");
    assert!(report.conditions_hold(), "{report:?}");
    // Q¹ = −(3/2)xya² and conj(Q²) = (3/2)(−x)(y)(1/a)⁻² agree.
    assert!(report.conditions.unwrap().q.is_trivially_zero());
}

#[test]
fn negated_conjugate_symbol_breaks_the_premise() {
    let (p, rep) = su2();
    let mut spec = su2_conjugation(&p).unwrap();
    spec = spec.symbol("y", -v("z")).symbol("z", -v("y"));
    let report = check_cr_reality(&p, &rep.reduction, &rep.embedding.connection, &rep.invariants, &spec).unwrap();
    assert!(!report.premise_holds());
    assert!(report.d_incompatible.iter().any(|s| s == "dZ1"));
}

#[test]
fn real_forms_fail_the_premise() {
    let p = abelian_structure().unwrap();
    let rep = full_report(&p).unwrap();
    let f = p.frame();
    let mut spec = ConjugationSpec::new().symbol(SCALE, v(SCALE));
    for n in [CONTACT, Z1, Z2, FIBER] {
        spec = spec.form(n, f.basis_form(n).unwrap());
    }
    let report = check_cr_reality(&p, &rep.reduction, &rep.embedding.connection, &rep.invariants, &spec).unwrap();
    assert!(!report.premise_holds());
    assert!(report.conditions.is_none());
}

#[test]
fn non_involution_is_rejected() {
    let (p, rep) = su2();
    let f = p.frame();
    let spec = su2_conjugation(&p)
        .unwrap()
        .form(Z1, f.basis_form(Z2).unwrap())
        .form(Z2, -f.basis_form(Z1).unwrap());
    let err = check_cr_reality(&p, &rep.reduction, &rep.embedding.connection, &rep.invariants, &spec).unwrap_err();
    assert!(matches!(err, Error::IllFormedInvolution(_)));
}
