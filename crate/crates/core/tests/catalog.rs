use flagcalc_core::catalog::{frame_from_structure_constants, StructureConstants};
use flagcalc_core::{check_frame_consistency, Error, Scalar};

#[test]
fn su2_frame() {
    let f = frame_from_structure_constants(&StructureConstants::su2()).unwrap();
    let b = |n: &str| f.basis_form(n).unwrap();
    assert!(f.d_of("alpha").unwrap().equals(&-b("beta").wedge(&b("gamma"))).unwrap());
    assert!(f.d_of("beta").unwrap().equals(&-b("gamma").wedge(&b("alpha"))).unwrap());
    assert!(f.d_of("gamma").unwrap().equals(&-b("alpha").wedge(&b("beta"))).unwrap());
    assert!(check_frame_consistency(&f).unwrap().is_consistent());
}

#[test]
fn abelian_constants() {
    let f = frame_from_structure_constants(&StructureConstants::new(&["e1", "e2", "e3"])).unwrap();
    for n in ["e1", "e2", "e3"] {
        assert!(f.d_of(n).unwrap().is_trivially_zero());
    }
}

#[test]
fn mixed_sign_constants_are_consistent() {
    // dσ¹ = −σ²σ³, dσ² = −σ³σ¹, dσ³ = σ¹σ²: every term of d² repeats a form.
    let mut sc = StructureConstants::new(&["s1", "s2", "s3"]);
    sc.set(0, 1, 2, Scalar::one()).unwrap();
    sc.set(1, 2, 0, Scalar::one()).unwrap();
    sc.set(2, 0, 1, Scalar::from_int(-1)).unwrap();
    assert_eq!(sc.get(2, 1, 0), Scalar::one());
    let f = frame_from_structure_constants(&sc).unwrap();
    assert!(f.d_of("s3").unwrap().equals(&f.basis_form("s1").unwrap().wedge(&f.basis_form("s2").unwrap())).unwrap());
}

#[test]
fn jacobi_violation() {
    // dσ¹ = σ²σ³, dσ² = σ¹σ⁴ gives d²σ¹ = σ¹σ⁴σ³ ≠ 0.
    let mut sc = StructureConstants::new(&["s1", "s2", "s3", "s4"]);
    sc.set(0, 1, 2, Scalar::from_int(-1)).unwrap();
    sc.set(1, 0, 3, Scalar::from_int(-1)).unwrap();
    assert!(matches!(frame_from_structure_constants(&sc), Err(Error::JacobiViolation(_))));
}

#[test]
fn antisymmetry_is_enforced() {
    let mut sc = StructureConstants::new(&["s1", "s2"]);
    assert!(sc.set(0, 1, 1, Scalar::one()).is_err());
    assert!(sc.set(0, 1, 5, Scalar::one()).is_err());
}

#[test]
fn symbolic_constants_are_declared() {
    let mut sc = StructureConstants::new(&["s1", "s2", "s3"]);
    sc.set(0, 1, 2, Scalar::var("m")).unwrap();
    let f = frame_from_structure_constants(&sc).unwrap();
    assert!(f.declared_constants().any(|s| &*s.name() == "m"));
}
