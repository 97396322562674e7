use super::connection::{assemble_pi, curvature, ConnectionForms, MatrixForm};
use crate::error::Result;
use crate::exterior::Form;
use crate::scalar::Scalar;

/// Transcendental factor of `TC₂`, kept out of the scalar field.
pub const TC2_FACTOR: &str = "1/pi^2";

/// `TC₂(π) = (1/π²)·form` with `form = tr(π∧π∧π)/24`, together with the
/// two identities that make it a transgression form.
#[derive(Clone, Debug)]
pub struct Transgression {
    pub form: Form,
    pub transcendental_factor: &'static str,
    /// `tr(Π∧π)`, reduced; vanishes for a flag connection.
    pub curvature_trace: Form,
    /// `d tr(π∧π∧π)`, reduced; vanishes for a flag connection.
    pub closedness: Form,
}

impl Transgression {
    pub fn verified(&self) -> bool {
        self.curvature_trace.is_trivially_zero() && self.closedness.is_trivially_zero()
    }
}

/// `tr(π∧π∧π)`.
pub fn cubic_trace(pi: &MatrixForm) -> Result<Form> {
    Ok(pi.wedge(pi)?.wedge(pi)?.trace())
}

pub fn tc2(pi: &MatrixForm) -> Result<Transgression> {
    let cubic = cubic_trace(pi)?;
    let curv = curvature(pi)?;
    Ok(Transgression {
        form: cubic.scale(&Scalar::ratio(1, 24)).reduce()?,
        transcendental_factor: TC2_FACTOR,
        curvature_trace: curv.wedge(pi)?.trace().reduce()?,
        closedness: cubic.d().reduce()?,
    })
}

/// The expansion of `tr(π∧π∧π)` in the connection slots:
/// `(3/2)(ω∧φ + ω¹∧ω²)∧ψ + 3ω∧φ¹∧φ² + 3ω¹∧(φ/2 + ω₁¹)∧φ² − 3ω²∧(φ/2 − ω₁¹)∧φ¹`.
pub fn cubic_trace_expansion(c: &ConnectionForms) -> Result<Form> {
    let half_phi = c.phi.scale(&Scalar::ratio(1, 2));
    let t1 = c
        .omega
        .try_wedge(&c.phi)?
        .try_add(&c.omega1.try_wedge(&c.omega2)?)?
        .try_wedge(&c.psi)?
        .scale(&Scalar::ratio(3, 2));
    let t2 = c.omega.try_wedge(&c.phi1)?.try_wedge(&c.phi2)?.scale(&Scalar::from_int(3));
    let t3 = c
        .omega1
        .try_wedge(&half_phi.try_add(&c.omega11)?)?
        .try_wedge(&c.phi2)?
        .scale(&Scalar::from_int(3));
    let t4 = c
        .omega2
        .try_wedge(&half_phi.try_sub(&c.omega11)?)?
        .try_wedge(&c.phi1)?
        .scale(&Scalar::from_int(-3));
    t1.try_add(&t2)?.try_add(&t3)?.try_add(&t4)
}

/// `tr(π∧π∧π)` minus its slot expansion, with the eight slots as
/// independent generators. Zero when the expansion is right.
pub fn abstract_expansion_residual() -> Result<Form> {
    let c = ConnectionForms::abstract_generators()?;
    let pi = assemble_pi(&c)?;
    cubic_trace(&pi)?.try_sub(&cubic_trace_expansion(&c)?)?.reduce()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_identity() {
        assert!(abstract_expansion_residual().unwrap().is_trivially_zero());
    }
}
