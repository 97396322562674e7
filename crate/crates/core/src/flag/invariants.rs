use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::matrix::{assemble_pi, curvature, extract_components, ConnectionForms};
use crate::scalar::Scalar;

use super::curvature::CurvatureCoefficients;

/// One structure equation written as `lhs − rhs`.
#[derive(Clone, Debug)]
pub struct EquationResidual {
    pub label: &'static str,
    pub residual: Form,
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub residuals: Vec<EquationResidual>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| r.residual.is_trivially_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &EquationResidual> {
        self.residuals.iter().filter(|r| !r.residual.is_trivially_zero())
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.residuals {
            writeln!(f, "{}: {}", r.label, r.residual)?;
        }
        Ok(())
    }
}

fn half(f: &Form) -> Form {
    f.scale(&Scalar::ratio(1, 2))
}

/// Residuals of the five structure equations without curvature terms:
///
/// - contact: `dω − ω∧φ − ω¹∧ω²`
/// - first-frame: `dω¹ − ½ω¹∧φ − ω¹∧ω₁¹ − ω∧φ¹`
/// - second-frame: `dω² − ½ω²∧φ + ω²∧ω₁¹ − ω∧φ²`
/// - phi: `dφ − ω¹∧φ² + ω²∧φ¹ − ω∧ψ`
/// - omega11: `dω₁¹ − (3/2)(ω¹∧φ² + ω²∧φ¹)`
pub fn verify_structure_equations(c: &ConnectionForms) -> Result<ResidualReport> {
    let w = |a: &Form, b: &Form| a.try_wedge(b);
    let contact = c.omega.d().try_sub(&w(&c.omega, &c.phi)?)?.try_sub(&w(&c.omega1, &c.omega2)?)?;
    let first = c
        .omega1
        .d()
        .try_sub(&half(&w(&c.omega1, &c.phi)?))?
        .try_sub(&w(&c.omega1, &c.omega11)?)?
        .try_sub(&w(&c.omega, &c.phi1)?)?;
    let second = c
        .omega2
        .d()
        .try_sub(&half(&w(&c.omega2, &c.phi)?))?
        .try_add(&w(&c.omega2, &c.omega11)?)?
        .try_sub(&w(&c.omega, &c.phi2)?)?;
    let phi = c
        .phi
        .d()
        .try_sub(&w(&c.omega1, &c.phi2)?)?
        .try_add(&w(&c.omega2, &c.phi1)?)?
        .try_sub(&w(&c.omega, &c.psi)?)?;
    let omega11 = c.omega11.d().try_sub(
        &w(&c.omega1, &c.phi2)?
            .try_add(&w(&c.omega2, &c.phi1)?)?
            .scale(&Scalar::ratio(3, 2)),
    )?;
    let residuals = [
        ("contact", contact),
        ("first-frame", first),
        ("second-frame", second),
        ("phi", phi),
        ("omega11", omega11),
    ]
    .into_iter()
    .map(|(label, f)| {
        Ok(EquationResidual {
            label,
            residual: f.reduce()?,
        })
    })
    .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport { residuals })
}

/// The curvature forms and their coefficients:
/// `Φ¹ = Q¹ω∧ω²`, `Φ² = Q²ω∧ω¹`, `Ψ = (U₁ω¹ + U₂ω²)∧ω`.
#[derive(Clone, Debug)]
pub struct CurvatureInvariants {
    pub phi1: Form,
    pub phi2: Form,
    pub psi: Form,
    pub q1: Scalar,
    pub q2: Scalar,
    pub u1: Scalar,
    pub u2: Scalar,
}

impl CurvatureInvariants {
    /// All four invariants vanish: the structure is locally flat.
    pub fn is_flat(&self) -> bool {
        [&self.q1, &self.q2, &self.u1, &self.u2].iter().all(|s| s.is_trivially_zero())
    }
}

/// Computes `Q¹, Q², U₁, U₂` from the curvature forms written out slot by
/// slot, checks them against the curvature matrix `dπ + π∧π`, and checks
/// `Q¹, Q²` against their closed forms in the curvature coefficients:
/// `Q¹ = S¹₂ − ½Rτ¹₂ − (2/3)W²₂ + R₂₂/6`,
/// `Q² = S²₁ + ½Rτ²₁ − (2/3)W¹₁ + R₁₁/6`.
pub fn curvature_invariants(c: &ConnectionForms, k: &CurvatureCoefficients) -> Result<CurvatureInvariants> {
    let rel = c.frame().relations();
    let w = |a: &Form, b: &Form| a.try_wedge(b);
    let phi1 = c
        .phi1
        .d()
        .try_sub(&w(&c.phi1, &c.omega11)?)?
        .try_sub(&half(&w(&c.omega1, &c.psi)?))?
        .try_sub(&half(&w(&c.phi, &c.phi1)?))?
        .reduce()?;
    let phi2 = c
        .phi2
        .d()
        .try_add(&w(&c.phi2, &c.omega11)?)?
        .try_sub(&half(&w(&c.omega2, &c.psi)?))?
        .try_sub(&half(&w(&c.phi, &c.phi2)?))?
        .reduce()?;
    let psi = c
        .psi
        .d()
        .try_sub(&w(&c.phi1, &c.phi2)?.scale(&Scalar::from_int(2)))?
        .try_sub(&w(&c.phi, &c.psi)?)?
        .reduce()?;
    let q1 = crate::matrix::single_coefficient(&phi1, &w(&c.omega, &c.omega2)?, "Phi1 = Q1 omega^omega2")?;
    let q2 = crate::matrix::single_coefficient(&phi2, &w(&c.omega, &c.omega1)?, "Phi2 = Q2 omega^omega1")?;
    let (coeffs, residual) = psi.decompose(&[w(&c.omega1, &c.omega)?, w(&c.omega2, &c.omega)?])?;
    if !residual.is_trivially_zero() {
        return Err(Error::shape("Psi = (U1 omega1 + U2 omega2)^omega", format!("residual {residual}")));
    }
    let [u1, u2]: [Scalar; 2] = coeffs.try_into().expect("two coefficients");

    let matrix = extract_components(&curvature(&assemble_pi(c)?)?, c)?;
    for (name, direct, via) in [
        ("Q1", &q1, &matrix.q1),
        ("Q2", &q2, &matrix.q2),
        ("U1", &u1, &matrix.u1),
        ("U2", &u2, &matrix.u2),
    ] {
        if !direct.equals(via, rel)? {
            return Err(Error::CrossCheckMismatch {
                quantity: format!("{name} (structure equations vs curvature matrix)"),
                detail: format!("{direct} != {via}"),
            });
        }
    }

    let q = |p, d| Scalar::ratio(p, d);
    let q1_closed = &(&(&k.s1_2 - &(&(&k.r * &k.tau1_2) * &q(1, 2))) - &(&k.w2_2 * &q(2, 3))) + &(&k.r2_2 * &q(1, 6));
    let q2_closed = &(&(&k.s2_1 + &(&(&k.r * &k.tau2_1) * &q(1, 2))) - &(&k.w1_1 * &q(2, 3))) + &(&k.r1_1 * &q(1, 6));
    for (name, direct, closed) in [("Q1", &q1, &q1_closed), ("Q2", &q2, &q2_closed)] {
        if !direct.equals(closed, rel)? {
            return Err(Error::CrossCheckMismatch {
                quantity: format!("{name} (structure equations vs closed form)"),
                detail: format!("{direct} != {}", closed.reduce(rel)?),
            });
        }
    }
    Ok(CurvatureInvariants {
        phi1,
        phi2,
        psi,
        q1: q1.reduce(rel)?,
        q2: q2.reduce(rel)?,
        u1: u1.reduce(rel)?,
        u2: u2.reduce(rel)?,
    })
}
