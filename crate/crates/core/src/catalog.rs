//! Concrete structures: invariant frames of Lie groups, the homogeneous
//! SU(2) family, a coordinate family with free function parameters, and the
//! end-to-end report.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{Form, FrameBuilder, FrameSpace};
use crate::flag::{
    bianchi_checks, curvature_coefficients, curvature_invariants, embed_to_connection, invariant_integrand,
    reduce_pseudo_flag, verify_structure_equations, ConjugationSpec, CurvatureReport, PseudoFlagStructure,
};
use crate::scalar::{RelationSet, Scalar, Symbol};

/// Basis names used by the constructors in this module.
pub const CONTACT: &str = "theta";
pub const Z1: &str = "Z1";
pub const Z2: &str = "Z2";
pub const FIBER: &str = "lam";
pub const SCALE: &str = "a";

/// Constants `cⁱⱼₖ = −cⁱₖⱼ` of a Lie algebra, defining the invariant coframe
/// `dσⁱ = −½ Σ cⁱⱼₖ σʲ∧σᵏ`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    names: Vec<String>,
    constants: BTreeMap<(usize, usize, usize), Scalar>,
}

impl StructureConstants {
    pub fn new(names: &[&str]) -> StructureConstants {
        StructureConstants {
            names: names.iter().map(|s| s.to_string()).collect(),
            constants: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Sets `cⁱⱼₖ = value` and `cⁱₖⱼ = −value`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) -> Result<()> {
        let n = self.dim();
        if i >= n || j >= n || k >= n {
            return Err(Error::InvalidFrame(format!("index out of range for dimension {n}")));
        }
        if j == k {
            if value.is_trivially_zero() {
                return Ok(());
            }
            return Err(Error::InvalidFrame(format!("c^{i}_{j}{k} must vanish by antisymmetry")));
        }
        self.constants.insert((i, k, j), -&value);
        self.constants.insert((i, j, k), value);
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.constants.get(&(i, j, k)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The constants of su(2) on `alpha, beta, gamma`:
    /// `dα = −β∧γ`, `dβ = −γ∧α`, `dγ = −α∧β`.
    pub fn su2() -> StructureConstants {
        let mut sc = StructureConstants::new(&["alpha", "beta", "gamma"]);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            sc.set(i, j, k, Scalar::one()).expect("valid indices");
        }
        sc
    }
}

/// Builds the invariant coframe and checks `d² = 0`, which for structure
/// constants is the Jacobi identity.
pub fn frame_from_structure_constants(sc: &StructureConstants) -> Result<Arc<FrameSpace>> {
    let names: Vec<&str> = sc.names.iter().map(|s| s.as_str()).collect();
    let mut b = FrameBuilder::new(&names)?;
    let sk = b.skeleton().clone();
    let mut symbols = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let mut rule = Form::zero(&sk, 2);
        for j in 0..names.len() {
            for k in j + 1..names.len() {
                let c = sc.get(i, j, k);
                if c.is_trivially_zero() {
                    continue;
                }
                symbols.extend(c.symbols());
                let anti = sc.get(i, k, j);
                if !(&c + &anti).is_trivially_zero() {
                    return Err(Error::InvalidFrame(format!("c^{i}_{j}{k} is not antisymmetric")));
                }
                let e = sk.basis_form(names[j])?.wedge(&sk.basis_form(names[k])?);
                rule = rule.try_sub(&e.scale(&c))?;
            }
        }
        b.d(name, rule)?;
    }
    symbols.sort();
    symbols.dedup();
    for s in symbols {
        b.constant(&s.name())?;
    }
    b.build().map_err(|e| match e {
        Error::InconsistentFrame(detail) => Error::JacobiViolation(detail),
        other => other,
    })
}

/// Parameters of the homogeneous family on SU(2).
#[derive(Clone, Debug)]
pub enum SU2FamilyParams {
    /// `dZ¹ = θ∧(xZ¹ + yZ²)`, `dZ² = θ∧(zZ¹ − xZ²)` with `x² + yz = −1`.
    Xyz { x: Scalar, y: Scalar, z: Scalar },
    /// `θ = γ`, `Z¹ = r₁β + r₂α`, `Z² = s₁β + s₂α` with `r₁s₂ − r₂s₁ = 1`.
    Rs {
        r1: Scalar,
        r2: Scalar,
        s1: Scalar,
        s2: Scalar,
    },
}

impl SU2FamilyParams {
    /// Fully symbolic `x, y, z`.
    pub fn symbolic_xyz() -> SU2FamilyParams {
        SU2FamilyParams::Xyz {
            x: Scalar::var("x"),
            y: Scalar::var("y"),
            z: Scalar::var("z"),
        }
    }

    /// Fully symbolic `r₁, r₂, s₁, s₂`.
    pub fn symbolic_rs() -> SU2FamilyParams {
        SU2FamilyParams::Rs {
            r1: Scalar::var("r1"),
            r2: Scalar::var("r2"),
            s1: Scalar::var("s1"),
            s2: Scalar::var("s2"),
        }
    }

    /// `x = r₁s₁ + r₂s₂`, `y = −(r₁² + r₂²)`, `z = s₁² + s₂²`.
    pub fn xyz(&self) -> (Scalar, Scalar, Scalar) {
        match self {
            SU2FamilyParams::Xyz { x, y, z } => (x.clone(), y.clone(), z.clone()),
            SU2FamilyParams::Rs { r1, r2, s1, s2 } => (
                &(r1 * s1) + &(r2 * s2),
                -(&(r1 * r1) + &(r2 * r2)),
                &(s1 * s1) + &(s2 * s2),
            ),
        }
    }

    fn parameters(&self) -> Vec<&Scalar> {
        match self {
            SU2FamilyParams::Xyz { x, y, z } => vec![x, y, z],
            SU2FamilyParams::Rs { r1, r2, s1, s2 } => vec![r1, r2, s1, s2],
        }
    }

    /// The defining relation, as an expression that must vanish.
    pub fn relation(&self) -> Scalar {
        match self {
            SU2FamilyParams::Xyz { x, y, z } => &(&(x * x) + &(y * z)) + &Scalar::one(),
            SU2FamilyParams::Rs { r1, r2, s1, s2 } => &(&(r1 * s2) - &(r2 * s1)) - &Scalar::one(),
        }
    }
}

/// The relation set for a defining relation: empty if it holds identically,
/// an error if it is a nonzero constant.
fn relation_set(expr: &Scalar, what: &str) -> Result<RelationSet> {
    let mut rel = RelationSet::new();
    if expr.is_trivially_zero() {
        return Ok(rel);
    }
    if expr.as_constant().is_some() {
        return Err(Error::NotAPseudoFlag(format!("parameters violate {what}")));
    }
    rel.add_polynomial(expr.numerator())?;
    Ok(rel)
}

/// Starts the four-dimensional frame `theta, Z1, Z2, lam` with the fiber
/// coordinate `a` (`da = a·lam`) and `dlam = 0`.
fn pseudo_flag_builder() -> Result<(FrameBuilder, Arc<FrameSpace>)> {
    let mut b = FrameBuilder::new(&[CONTACT, Z1, Z2, FIBER])?;
    let sk = b.skeleton().clone();
    let lam = sk.basis_form(FIBER)?;
    b.d(CONTACT, sk.basis_form(Z1)?.wedge(&sk.basis_form(Z2)?))?;
    b.d(FIBER, Form::zero(&sk, 2))?;
    b.fiber(SCALE, lam.scale(&Scalar::var(SCALE)))?;
    Ok((b, sk))
}

/// The homogeneous pseudo-flag structure on SU(2) for constant parameters.
pub fn su2_family(p: &SU2FamilyParams) -> Result<PseudoFlagStructure> {
    let scale = Symbol::new(SCALE);
    let mut symbols = Vec::new();
    for v in p.parameters() {
        if v.symbols().contains(&scale) {
            return Err(Error::NotSupported(
                "parameters depending on the fiber coordinate".to_string(),
            ));
        }
        symbols.extend(v.symbols());
    }
    symbols.sort();
    symbols.dedup();
    let rel = relation_set(&p.relation(), "the defining relation of the family")?;

    let (mut b, sk) = pseudo_flag_builder()?;
    let theta = sk.basis_form(CONTACT)?;
    let z1 = sk.basis_form(Z1)?;
    let z2 = sk.basis_form(Z2)?;
    let (dz1, dz2) = match p {
        SU2FamilyParams::Xyz { x, y, z } => (
            theta.wedge(&z1.scale(x).try_add(&z2.scale(y))?),
            theta.wedge(&z1.scale(z).try_sub(&z2.scale(x))?),
        ),
        SU2FamilyParams::Rs { r1, r2, s1, s2 } => {
            // [β; α] is the inverse of [[r₁, r₂], [s₁, s₂]] applied to [Z¹; Z²].
            let beta = z1.scale(s2).try_sub(&z2.scale(r2))?;
            let alpha = z2.scale(r1).try_sub(&z1.scale(s1))?;
            let su2 = frame_from_structure_constants(&StructureConstants::su2())?;
            let images = [alpha.clone(), beta.clone(), theta.clone()];
            let pull = |name: &str| su2.d_of(name)?.map_basis(&sk, &images, |c| Ok(c.clone()));
            let (da, db) = (pull("alpha")?, pull("beta")?);
            let dgamma = pull("gamma")?;
            let expected = z1.wedge(&z2);
            let check = sk.with_relations(&rel);
            if !dgamma.rebase(&check)?.equals(&expected.rebase(&check)?)? {
                return Err(Error::NotAPseudoFlag(format!("d gamma != Z1^Z2 for these parameters: {dgamma}")));
            }
            (
                db.scale(r1).try_add(&da.scale(r2))?,
                db.scale(s1).try_add(&da.scale(s2))?,
            )
        }
    };
    b.d(Z1, dz1)?;
    b.d(Z2, dz2)?;
    for s in symbols {
        b.constant(&s.name())?;
    }
    b.relations(&rel);
    let frame = b.build()?;
    PseudoFlagStructure::new(frame, CONTACT, Z1, Z2, FIBER, SCALE)
}

/// A structure in coordinates `t, u, v` with contact form `θ = dv + t·du`
/// and `Z¹ = dt + B·du`, `Z² = C·dt + (1 + BC)·du` for polynomials `B, C`
/// in `t, u, v` (and constants). Generic `B, C` give non-constant curvature.
pub fn coordinate_structure(b_fn: &Scalar, c_fn: &Scalar) -> Result<PseudoFlagStructure> {
    let coords = ["t", "u", "v"];
    let scale = Symbol::new(SCALE);
    if b_fn.symbols().contains(&scale) || c_fn.symbols().contains(&scale) {
        return Err(Error::NotSupported("coefficients depending on the fiber coordinate".to_string()));
    }
    let (mut b, sk) = pseudo_flag_builder()?;
    let theta = sk.basis_form(CONTACT)?;
    let z1 = sk.basis_form(Z1)?;
    let z2 = sk.basis_form(Z2)?;
    let t = Scalar::var("t");
    let one_bc = &Scalar::one() + &(b_fn * c_fn);
    // Inverting the unimodular matrix [[1, B], [C, 1 + BC]].
    let dt = z1.scale(&one_bc).try_sub(&z2.scale(b_fn))?;
    let du = z2.try_sub(&z1.scale(c_fn))?;
    let dv = theta.try_sub(&du.scale(&t))?;
    let differentials = [dt.clone(), du.clone(), dv.clone()];
    let d = |f: &Scalar| -> Result<Form> {
        let mut out = Form::zero(&sk, 1);
        for (name, dx) in coords.iter().zip(&differentials) {
            out = out.try_add(&dx.scale(&f.partial_by_name(name).unwrap_or_else(|_| Scalar::zero())))?;
        }
        Ok(out)
    };
    b.d(Z1, d(b_fn)?.wedge(&du))?;
    b.d(Z2, d(c_fn)?.wedge(&dt).try_add(&d(&one_bc)?.wedge(&du))?)?;
    for (name, dx) in coords.iter().zip(differentials) {
        b.fiber(name, dx)?;
    }
    let mut constants: Vec<Symbol> = b_fn.symbols();
    constants.extend(c_fn.symbols());
    constants.sort();
    constants.dedup();
    for s in constants {
        let n = s.name();
        if !coords.contains(&&*n) {
            b.constant(&n)?;
        }
    }
    let frame = b.build()?;
    PseudoFlagStructure::new(frame, CONTACT, Z1, Z2, FIBER, SCALE)
}

/// The real form of the symbolic `x, y, z` family: `x̄ = −x`, `ȳ = z`,
/// `ā = 1/a`, `θ̄ = θ`, `Z̄¹ = −iZ²`, `Z̄² = −iZ¹`, `λ̄ = −λ`.
pub fn su2_conjugation(p: &PseudoFlagStructure) -> Result<ConjugationSpec> {
    let f = p.frame();
    let mi = -Scalar::i();
    Ok(ConjugationSpec::new()
        .symbol("x", -Scalar::var("x"))
        .symbol("y", Scalar::var("z"))
        .symbol("z", Scalar::var("y"))
        .symbol(SCALE, Scalar::var(SCALE).inv()?)
        .form(CONTACT, f.basis_form(CONTACT)?)
        .form(Z1, f.basis_form(Z2)?.scale(&mi))
        .form(Z2, f.basis_form(Z1)?.scale(&mi))
        .form(FIBER, -f.basis_form(FIBER)?))
}

/// The abelian structure `dZ¹ = dZ² = 0`.
pub fn abelian_structure() -> Result<PseudoFlagStructure> {
    let (mut b, sk) = pseudo_flag_builder()?;
    b.d(Z1, Form::zero(&sk, 2))?;
    b.d(Z2, Form::zero(&sk, 2))?;
    PseudoFlagStructure::new(b.build()?, CONTACT, Z1, Z2, FIBER, SCALE)
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Stage {
        stage: name,
        source: Box::new(e),
    })
}

/// Runs the whole pipeline; the first failing stage aborts with its name.
pub fn full_report(p: &PseudoFlagStructure) -> Result<CurvatureReport> {
    let reduction = stage("reduce", reduce_pseudo_flag(p))?;
    let coefficients = stage("curvature", curvature_coefficients(&reduction))?;
    let embedding = stage("embed", embed_to_connection(&reduction, &coefficients))?;
    let structure = stage("structure", verify_structure_equations(&embedding.connection))?;
    if let Some(bad) = structure.failures().next() {
        return stage(
            "structure",
            Err(Error::shape(bad.label, format!("residual {}", bad.residual))),
        );
    }
    let invariants = stage("invariants", curvature_invariants(&embedding.connection, &coefficients))?;
    let bianchi = stage("bianchi", bianchi_checks(&embedding.connection, &invariants))?;
    if !bianchi.passed() {
        return stage(
            "bianchi",
            Err(Error::CrossCheckMismatch {
                quantity: "Bianchi identities".to_string(),
                detail: format!(
                    "U2 slot {}, U1 slot {}, C difference {}",
                    bianchi.u2_check, bianchi.u1_check, bianchi.c_check
                ),
            }),
        );
    }
    let integrand = stage("integrand", invariant_integrand(&reduction, &coefficients, &embedding))?;
    let flat = invariants.is_flat();
    Ok(CurvatureReport {
        reduction,
        coefficients,
        embedding,
        structure,
        invariants,
        bianchi,
        integrand,
        flat,
    })
}
