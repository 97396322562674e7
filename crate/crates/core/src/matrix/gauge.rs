use std::sync::Arc;

use super::connection::{assemble_pi, curvature, extract_components, ConnectionForms, CurvatureComponents, MatrixForm};
use crate::error::{Error, Result};
use crate::exterior::{Form, FrameSpace};
use crate::scalar::{RelationSet, Scalar};

/// Symbol names used by [`BorelElement::symbolic`].
pub const GAUGE_PARAMETERS: [&str; 5] = ["alpha", "beta", "gamma", "delta", "epsilon"];

/// Upper-triangular element of `SL(3, C)`:
///
/// ```text
/// | α   γ        ε |
/// | 0   1/(αβ)   δ |
/// | 0   0        β |
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct BorelElement {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub epsilon: Scalar,
}

impl BorelElement {
    pub fn new(alpha: Scalar, beta: Scalar, gamma: Scalar, delta: Scalar, epsilon: Scalar) -> Self {
        BorelElement {
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
        }
    }

    pub fn identity() -> Self {
        BorelElement::diagonal(Scalar::one(), Scalar::one())
    }

    pub fn diagonal(alpha: Scalar, beta: Scalar) -> Self {
        BorelElement::new(alpha, beta, Scalar::zero(), Scalar::zero(), Scalar::zero())
    }

    /// Fully symbolic element over [`GAUGE_PARAMETERS`].
    pub fn symbolic() -> Self {
        let [a, b, c, d, e] = GAUGE_PARAMETERS.map(Scalar::var);
        BorelElement::new(a, b, c, d, e)
    }

    pub fn check_invertible(&self, rel: &RelationSet) -> Result<()> {
        for (name, v) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if v.is_zero(rel)? {
                return Err(Error::NonInvertible(format!("{name} vanishes")));
            }
        }
        Ok(())
    }

    fn middle(&self) -> Result<Scalar> {
        (&self.alpha * &self.beta)
            .inv()
            .map_err(|_| Error::NonInvertible("alpha*beta vanishes".into()))
    }

    pub fn matrix(&self, frame: &Arc<FrameSpace>) -> Result<MatrixForm> {
        let z = Scalar::zero;
        Ok(MatrixForm::from_scalars(
            frame,
            [
                [self.alpha.clone(), self.gamma.clone(), self.epsilon.clone()],
                [z(), self.middle()?, self.delta.clone()],
                [z(), z(), self.beta.clone()],
            ],
        ))
    }

    /// Closed-form inverse.
    pub fn inverse_matrix(&self, frame: &Arc<FrameSpace>) -> Result<MatrixForm> {
        let (a, b, c, d, e) = (&self.alpha, &self.beta, &self.gamma, &self.delta, &self.epsilon);
        let ia = a.inv().map_err(|_| Error::NonInvertible("alpha vanishes".into()))?;
        let ib = b.inv().map_err(|_| Error::NonInvertible("beta vanishes".into()))?;
        let z = Scalar::zero;
        Ok(MatrixForm::from_scalars(
            frame,
            [
                [ia.clone(), -(b * c), &(c * d) - &(e * &(&ia * &ib))],
                [z(), a * b, -(a * d)],
                [z(), z(), ib],
            ],
        ))
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &BorelElement) -> Result<BorelElement> {
        let (m1, m2) = (self.middle()?, other.middle()?);
        Ok(BorelElement {
            alpha: &self.alpha * &other.alpha,
            beta: &self.beta * &other.beta,
            gamma: &(&self.alpha * &other.gamma) + &(&self.gamma * &m2),
            delta: &(&m1 * &other.delta) + &(&self.delta * &other.beta),
            epsilon: &(&(&self.alpha * &other.epsilon) + &(&self.gamma * &other.delta))
                + &(&self.epsilon * &other.beta),
        })
    }
}

/// `R_h*π = h⁻¹dh + h⁻¹πh`. `dh` is taken in the frame of `pi`, so it is
/// nonzero only when the entries of `h` involve fiber coordinates.
pub fn gauge_transform(pi: &MatrixForm, h: &BorelElement) -> Result<MatrixForm> {
    let frame = pi.frame();
    h.check_invertible(frame.relations())?;
    let hm = h.matrix(frame)?;
    let hi = h.inverse_matrix(frame)?;
    let maurer_cartan = hi.wedge(&hm.d())?;
    let adjoint = hi.wedge(pi)?.wedge(&hm)?;
    maurer_cartan.try_add(&adjoint)
}

/// Closed-form action of a constant `h` on the connection slots, i.e. the
/// slots of `h⁻¹πh`. With `(a, b, c, d, e) = (α, β, γ, δ, ε)`:
///
/// ```text
/// ω̃   = (a/b)ω
/// ω̃¹  = a²b ω¹ − 2a²d ω
/// ω̃²  = ω²/(ab²) + (c/b)ω
/// φ̃   = φ + abc ω¹ + (2d/b)ω² + (4e/b − 2acd)ω
/// ω̃₁¹ = ω₁¹ + (3/2)abc ω¹ − (3d/b)ω² − 3acd ω
/// φ̃¹  = ab²φ¹ + 2abd ω₁¹ − abd φ + 2abe ω¹ − 4ad² ω² − 4ade ω
/// φ̃²  = φ²/(a²b) + (c/a)ω₁¹ + (c/2a)φ + bc² ω¹
///       + (2e/(a²b²) − 2cd/(ab))ω² + (2ce/(ab) − 2c²d)ω
/// ψ̃   = (b/a)ψ + (4e/a − 2bcd)φ + 4bce ω¹ + (8de/(ab) − 8cd²)ω²
///       + 2b²c φ¹ + (4d/a)φ² + 4bcd ω₁¹ + (8e²/(ab) − 8cde)ω
/// ```
pub fn gauge_law(c: &ConnectionForms, h: &BorelElement) -> Result<ConnectionForms> {
    let (a, b, cc, d, e) = (&h.alpha, &h.beta, &h.gamma, &h.delta, &h.epsilon);
    let ia = a.inv().map_err(|_| Error::NonInvertible("alpha vanishes".into()))?;
    let ib = b.inv().map_err(|_| Error::NonInvertible("beta vanishes".into()))?;
    let n = |k: i64| Scalar::from_int(k);
    let q = |p: i64, r: i64| Scalar::ratio(p, r);
    let iab = &ia * &ib;
    let (w, w1, w2, ph, w11, p1, p2, ps) = (
        &c.omega, &c.omega1, &c.omega2, &c.phi, &c.omega11, &c.phi1, &c.phi2, &c.psi,
    );
    let comb = |terms: Vec<(Scalar, &Form)>| -> Result<Form> {
        let mut acc = Form::zero(c.frame(), 1);
        for (k, f) in terms {
            acc = acc.try_add(&f.scale(&k))?;
        }
        Ok(acc)
    };
    let omega = comb(vec![(a * &ib, w)])?;
    let omega1 = comb(vec![(&(a * a) * b, w1), (&n(-2) * &(&(a * a) * d), w)])?;
    let omega2 = comb(vec![(&ia * &(&ib * &ib), w2), (cc * &ib, w)])?;
    let phi = comb(vec![
        (n(1), ph),
        (&(a * b) * cc, w1),
        (&(&n(2) * d) * &ib, w2),
        (&(&(&n(4) * e) * &ib) - &(&n(2) * &(&(a * cc) * d)), w),
    ])?;
    let omega11 = comb(vec![
        (n(1), w11),
        (&q(3, 2) * &(&(a * b) * cc), w1),
        (&(&n(-3) * d) * &ib, w2),
        (&n(-3) * &(&(a * cc) * d), w),
    ])?;
    let phi1 = comb(vec![
        (a * &(b * b), p1),
        (&n(2) * &(&(a * b) * d), w11),
        (&n(-1) * &(&(a * b) * d), ph),
        (&n(2) * &(&(a * b) * e), w1),
        (&n(-4) * &(a * &(d * d)), w2),
        (&n(-4) * &(&(a * d) * e), w),
    ])?;
    let phi2 = comb(vec![
        (&(&ia * &ia) * &ib, p2),
        (cc * &ia, w11),
        (&q(1, 2) * &(cc * &ia), ph),
        (b * &(cc * cc), w1),
        (
            &(&n(2) * &(e * &(&iab * &iab))) - &(&n(2) * &(&(cc * d) * &iab)),
            w2,
        ),
        (
            &(&n(2) * &(&(cc * e) * &iab)) - &(&n(2) * &(&(cc * cc) * d)),
            w,
        ),
    ])?;
    let psi = comb(vec![
        (b * &ia, ps),
        (&(&(&n(4) * e) * &ia) - &(&n(2) * &(&(b * cc) * d)), ph),
        (&n(4) * &(&(b * cc) * e), w1),
        (
            &(&n(8) * &(&(d * e) * &iab)) - &(&n(8) * &(cc * &(d * d))),
            w2,
        ),
        (&n(2) * &(&(b * b) * cc), p1),
        (&(&n(4) * d) * &ia, p2),
        (&n(4) * &(&(b * cc) * d), w11),
        (
            &(&n(8) * &(&(e * e) * &iab)) - &(&n(8) * &(&(cc * d) * e)),
            w,
        ),
    ])?;
    ConnectionForms::new([omega, omega1, omega2, phi, omega11, phi1, phi2, psi])
}

/// Residuals of the gauge checks, all reduced modulo the frame relations.
#[derive(Clone, Debug)]
pub struct GaugeReport {
    /// Per slot: transformed slot minus (closed-form law + slot of `h⁻¹dh`).
    pub slot_residuals: Vec<(&'static str, Form)>,
    /// `Q̃¹ − αβ⁵Q¹`.
    pub q1_residual: Scalar,
    /// `Q̃² − α⁻⁵β⁻¹Q²`.
    pub q2_residual: Scalar,
    pub original: CurvatureComponents,
    pub transformed: CurvatureComponents,
}

impl GaugeReport {
    pub fn passed(&self) -> bool {
        self.slot_residuals.iter().all(|(_, f)| f.is_trivially_zero())
            && self.q1_residual.is_trivially_zero()
            && self.q2_residual.is_trivially_zero()
    }
}

/// Checks the closed-form transformation law slot by slot and the scaling
/// `Q̃¹ = αβ⁵Q¹`, `Q̃² = α⁻⁵β⁻¹Q²` of the curvature coefficients.
pub fn verify_gauge_covariance(pi: &MatrixForm, h: &BorelElement) -> Result<GaugeReport> {
    let frame = pi.frame().clone();
    let rel = frame.relations().clone();
    let c = ConnectionForms::from_matrix(pi)?;
    let transformed_pi = gauge_transform(pi, h)?;
    let transformed = ConnectionForms::from_matrix(&transformed_pi)?;

    let hm = h.matrix(&frame)?;
    let hi = h.inverse_matrix(&frame)?;
    let mc = ConnectionForms::from_matrix(&hi.wedge(&hm.d())?)?;
    let law = gauge_law(&c, h)?;
    let mut slot_residuals = Vec::new();
    for (k, name) in super::SLOT_NAMES.iter().enumerate() {
        let expected = law.slots()[k].try_add(mc.slots()[k])?;
        let r = transformed.slots()[k].try_sub(&expected)?.reduce()?;
        slot_residuals.push((*name, r));
    }

    let original = extract_components(&curvature(&assemble_pi(&c)?)?, &c)?;
    let new = extract_components(&curvature(&transformed_pi)?, &transformed)?;
    let (a, b) = (&h.alpha, &h.beta);
    let q1_expected = &(a * &b.pow(5)?) * &original.q1;
    let q2_expected = &(&a.pow(-5)? * &b.pow(-1)?) * &original.q2;
    Ok(GaugeReport {
        slot_residuals,
        q1_residual: (&new.q1 - &q1_expected).reduce(&rel)?,
        q2_residual: (&new.q2 - &q2_expected).reduce(&rel)?,
        original,
        transformed: new,
    })
}

/// Extends `frame` by fiber coordinates named `names` whose differentials
/// are new basis forms `d<name>`, so that a Borel element built from them
/// has `dh ≠ 0`.
pub fn with_gauge_coordinates(frame: &Arc<FrameSpace>, names: &[&str]) -> Result<Arc<FrameSpace>> {
    let extra: Vec<String> = names.iter().map(|n| format!("d{n}")).collect();
    let extra_refs: Vec<&str> = extra.iter().map(|s| s.as_str()).collect();
    let mut b = frame.extend(&extra_refs)?;
    for (n, dn) in names.iter().zip(&extra) {
        let form = b.basis(dn)?;
        b.fiber(n, form)?;
    }
    b.build()
}

/// Residuals of the section-change identities for `π̃ = R_h*π`:
/// `tr(h⁻¹dh∧dh⁻¹∧dh) = 0`,
/// `d tr(h⁻¹π∧dh) = tr(dh⁻¹∧π∧dh − h⁻¹π∧π∧dh)` and
/// `tr(π̃∧π̃∧π̃) − tr(π∧π∧π) = −3 d tr(h⁻¹π∧dh)`.
///
/// At the level of `TC₂ = tr(π³)/(24π²)` the last identity reads
/// `TC₂(π̃) − TC₂(π) = −(1/8π²) d tr(h⁻¹π∧dh)`.
#[derive(Clone, Debug)]
pub struct SectionReport {
    pub maurer_cartan_trace: Form,
    pub derivative_identity: Form,
    pub transgression_identity: Form,
}

impl SectionReport {
    pub fn passed(&self) -> bool {
        self.maurer_cartan_trace.is_trivially_zero()
            && self.derivative_identity.is_trivially_zero()
            && self.transgression_identity.is_trivially_zero()
    }
}

pub fn section_dependence_check(pi: &MatrixForm, h: &BorelElement) -> Result<SectionReport> {
    let frame = pi.frame().clone();
    h.check_invertible(frame.relations())?;
    let hm = h.matrix(&frame)?;
    let hi = h.inverse_matrix(&frame)?;
    let dh = hm.d();
    let dhi = hi.d();

    let mct = hi.wedge(&dh)?.wedge(&dhi)?.wedge(&dh)?.trace().reduce()?;

    let hpi = hi.wedge(pi)?;
    let chern = hpi.wedge(&dh)?.trace();
    let lhs = chern.d();
    let rhs = dhi.wedge(pi)?.wedge(&dh)?.try_sub(&hpi.wedge(pi)?.wedge(&dh)?)?.trace();
    let derivative_identity = lhs.try_sub(&rhs)?.reduce()?;

    let tilde = gauge_transform(pi, h)?;
    let cube = |m: &MatrixForm| -> Result<Form> { Ok(m.wedge(m)?.wedge(m)?.trace()) };
    let diff = cube(&tilde)?.try_sub(&cube(pi)?)?;
    let transgression_identity = diff.try_add(&lhs.scale(&Scalar::from_int(3)))?.reduce()?;

    Ok(SectionReport {
        maurer_cartan_trace: mct,
        derivative_identity,
        transgression_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_is_inverse() {
        let c = ConnectionForms::abstract_generators().unwrap();
        let h = BorelElement::symbolic();
        let m = h.matrix(c.frame()).unwrap();
        let mi = h.inverse_matrix(c.frame()).unwrap();
        let id = MatrixForm::identity(c.frame());
        assert!(m.wedge(&mi).unwrap().try_sub(&id).unwrap().is_zero().unwrap());
        assert!(mi.wedge(&m).unwrap().try_sub(&id).unwrap().is_zero().unwrap());
    }

    #[test]
    fn law_matches_adjoint_action() {
        let c = ConnectionForms::abstract_generators().unwrap();
        let pi = assemble_pi(&c).unwrap();
        let h = BorelElement::symbolic();
        let moved = ConnectionForms::from_matrix(&gauge_transform(&pi, &h).unwrap()).unwrap();
        let law = gauge_law(&c, &h).unwrap();
        for (k, name) in crate::matrix::SLOT_NAMES.iter().enumerate() {
            let r = moved.slots()[k].try_sub(law.slots()[k]).unwrap();
            assert!(r.is_zero().unwrap(), "{name}: {r}");
        }
    }

    #[test]
    fn identity_and_composition() {
        let c = ConnectionForms::abstract_generators().unwrap();
        let pi = assemble_pi(&c).unwrap();
        let same = gauge_transform(&pi, &BorelElement::identity()).unwrap();
        assert!(same.try_sub(&pi).unwrap().is_zero().unwrap());

        let h1 = BorelElement::symbolic();
        let v = |s: &str| Scalar::var(s);
        let h2 = BorelElement::new(v("g_a2"), v("g_b2"), v("g_c2"), v("g_d2"), v("g_e2"));
        let two_step = gauge_transform(&gauge_transform(&pi, &h1).unwrap(), &h2).unwrap();
        let one_step = gauge_transform(&pi, &h1.compose(&h2).unwrap()).unwrap();
        assert!(two_step.try_sub(&one_step).unwrap().is_zero().unwrap());
    }

    #[test]
    fn zero_alpha_is_not_invertible() {
        let c = ConnectionForms::abstract_generators().unwrap();
        let pi = assemble_pi(&c).unwrap();
        let h = BorelElement::diagonal(Scalar::zero(), Scalar::one());
        assert!(matches!(gauge_transform(&pi, &h), Err(Error::NonInvertible(_))));
    }
}
