use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::matrix::ConnectionForms;
use crate::scalar::Scalar;

use super::invariants::CurvatureInvariants;

/// Coefficients of the covariant derivatives of `Q¹, Q², U₁, U₂` along
/// `ω, ω¹, ω²`:
///
/// - `dQ¹ + 2Q¹ω₁¹ − 2Q¹φ = S¹ω − ½U₂ω¹ + T¹ω²`
/// - `dQ² − 2Q²ω₁¹ − 2Q²φ = S²ω − ½U₁ω² + T²ω¹`
/// - `dU₁ − (5/2)U₁φ − U₁ω₁¹ + 2Q²φ¹ = Aω + Bω¹ + Cω²`
/// - `dU₂ − (5/2)U₂φ + U₂ω₁¹ − 2Q¹φ² = Dω + Cω¹ + Eω²`
///
/// The `*_check` fields are the differences that must vanish.
#[derive(Clone, Debug)]
pub struct BianchiReport {
    pub s1: Scalar,
    pub t1: Scalar,
    pub s2: Scalar,
    pub t2: Scalar,
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub e: Scalar,
    /// `ω¹` coefficient of the first line plus `½U₂`.
    pub u2_check: Scalar,
    /// `ω²` coefficient of the second line plus `½U₁`.
    pub u1_check: Scalar,
    /// Difference of the two `C` coefficients.
    pub c_check: Scalar,
}

impl BianchiReport {
    pub fn passed(&self) -> bool {
        [&self.u2_check, &self.u1_check, &self.c_check]
            .iter()
            .all(|s| s.is_trivially_zero())
    }
}

fn expand(f: &Form, c: &ConnectionForms, label: &str) -> Result<[Scalar; 3]> {
    let (coeffs, residual) = f.decompose(&[c.omega.clone(), c.omega1.clone(), c.omega2.clone()])?;
    if !residual.is_trivially_zero() {
        return Err(Error::shape(label, format!("residual {residual} outside the span of omega, omega1, omega2")));
    }
    Ok(coeffs.try_into().expect("three coefficients"))
}

pub fn bianchi_checks(c: &ConnectionForms, inv: &CurvatureInvariants) -> Result<BianchiReport> {
    let rel = c.frame().relations();
    let frame = c.frame();
    let d = |s: &Scalar| Form::scalar(frame, s.clone()).d();
    let k = |n: i64| Scalar::from_int(n);
    let (q1, q2, u1, u2) = (&inv.q1, &inv.q2, &inv.u1, &inv.u2);

    let l1 = d(q1)
        .try_add(&c.omega11.scale(&(&k(2) * q1)))?
        .try_sub(&c.phi.scale(&(&k(2) * q1)))?;
    let [s1, m1, t1] = expand(&l1, c, "dQ1 + 2Q1 omega11 - 2Q1 phi")?;
    let l2 = d(q2)
        .try_sub(&c.omega11.scale(&(&k(2) * q2)))?
        .try_sub(&c.phi.scale(&(&k(2) * q2)))?;
    let [s2, t2, m2] = expand(&l2, c, "dQ2 - 2Q2 omega11 - 2Q2 phi")?;
    let five_halves = Scalar::ratio(5, 2);
    let l3 = d(u1)
        .try_sub(&c.phi.scale(&(&five_halves * u1)))?
        .try_sub(&c.omega11.scale(u1))?
        .try_add(&c.phi1.scale(&(&k(2) * q2)))?;
    let [a, b, cc] = expand(&l3, c, "dU1 - 5/2 U1 phi - U1 omega11 + 2Q2 phi1")?;
    let l4 = d(u2)
        .try_sub(&c.phi.scale(&(&five_halves * u2)))?
        .try_add(&c.omega11.scale(u2))?
        .try_sub(&c.phi2.scale(&(&k(2) * q1)))?;
    let [dd, c2, e] = expand(&l4, c, "dU2 - 5/2 U2 phi + U2 omega11 - 2Q1 phi2")?;

    let half = Scalar::ratio(1, 2);
    let r = |s: Scalar| s.reduce(rel);
    Ok(BianchiReport {
        u2_check: r(&m1 + &(&half * u2))?,
        u1_check: r(&m2 + &(&half * u1))?,
        c_check: r(&cc - &c2)?,
        s1: r(s1)?,
        t1: r(t1)?,
        s2: r(s2)?,
        t2: r(t2)?,
        a: r(a)?,
        b: r(b)?,
        c: r(cc)?,
        d: r(dd)?,
        e: r(e)?,
    })
}
