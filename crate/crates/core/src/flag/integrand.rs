use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::matrix::{assemble_pi, cubic_trace};
use crate::scalar::Scalar;

use super::curvature::{CurvatureCoefficients, EmbeddingData};
use super::pseudo::ReductionOutput;

/// Transcendental factor multiplying [`Integrand::form`].
pub const INTEGRAND_FACTOR: &str = "1/(8*pi^2)";

/// The 3-form
/// `B = θ∧θ¹∧θ²·(G/2 + R²/16 − τ¹₂τ²₁) + θ₁¹∧(E²θ∧θ¹ + E¹θ∧θ² − (R/2)θ¹∧θ²)`
/// whose integral, times `1/(8π²)`, is the secondary invariant.
#[derive(Clone, Debug)]
pub struct Integrand {
    pub form: Form,
    pub transcendental_factor: &'static str,
    /// `form` with every `λ` term dropped.
    pub base_form: Form,
    /// Coefficient of `θ∧θ¹∧θ²` in `base_form`.
    pub volume_coefficient: Scalar,
}

/// Builds the integrand and checks it against the cubic trace of the
/// connection: `tr(π∧π∧π) = 3B`.
pub fn invariant_integrand(
    r: &ReductionOutput,
    k: &CurvatureCoefficients,
    e: &EmbeddingData,
) -> Result<Integrand> {
    let rel = r.frame.relations();
    let q = |p, d| Scalar::ratio(p, d);
    let vol_coeff = &(&(&e.g * &q(1, 2)) + &(&(&k.r * &k.r) * &q(1, 16))) - &(&k.tau1_2 * &k.tau2_1);
    let vol = r.theta.try_wedge(&r.theta1)?.try_wedge(&r.theta2)?;
    let inner = r
        .theta
        .try_wedge(&r.theta1)?
        .scale(&e.e2)
        .try_add(&r.theta.try_wedge(&r.theta2)?.scale(&e.e1))?
        .try_sub(&r.theta1.try_wedge(&r.theta2)?.scale(&(&k.r * &q(1, 2))))?;
    let form = vol.scale(&vol_coeff).try_add(&r.theta11.try_wedge(&inner)?)?.reduce()?;

    let trace = cubic_trace(&assemble_pi(&e.connection)?)?;
    let diff = trace.try_sub(&form.scale(&Scalar::from_int(3)))?.reduce()?;
    if !diff.is_trivially_zero() {
        return Err(Error::CrossCheckMismatch {
            quantity: "tr(pi^pi^pi) = 3 B".to_string(),
            detail: format!("difference {diff}"),
        });
    }
    let names = r.names();
    let base_form = form.restrict(&[&names[3]], &HashMap::new())?.reduce()?;
    let volume_coefficient = base_form
        .coefficient(&[&names[0], &names[1], &names[2]])?
        .reduce(rel)?;
    Ok(Integrand {
        form,
        transcendental_factor: INTEGRAND_FACTOR,
        base_form,
        volume_coefficient,
    })
}
