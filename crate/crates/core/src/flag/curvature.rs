use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::matrix::ConnectionForms;
use crate::scalar::Scalar;

use super::pseudo::ReductionOutput;

/// Coefficients of the normalized forms and their first derivatives.
///
/// Index convention: `sX_Y` is `S^X_Y` (upper `X`, lower `Y`), so
/// `dτ¹ − τ¹∧θ₁¹ = −W²θ¹∧θ² + S¹₁θ∧θ¹ + S¹₂θ∧θ²`. Derivative subscripts
/// `0, 1, 2` refer to `θ, θ¹, θ²`; `r2_1` is the `θ¹` coefficient of the
/// covariant derivative of `R₂`.
#[derive(Clone, Debug)]
pub struct CurvatureCoefficients {
    pub r: Scalar,
    pub w1: Scalar,
    pub w2: Scalar,
    pub s1_1: Scalar,
    pub s1_2: Scalar,
    pub s2_1: Scalar,
    pub s2_2: Scalar,
    pub tau1_2: Scalar,
    pub tau2_1: Scalar,
    pub r0: Scalar,
    pub r1: Scalar,
    pub r2: Scalar,
    pub w1_0: Scalar,
    pub w1_1: Scalar,
    pub w1_2: Scalar,
    pub w2_0: Scalar,
    pub w2_1: Scalar,
    pub w2_2: Scalar,
    pub r0_1: Scalar,
    pub r1_1: Scalar,
    pub r1_2: Scalar,
    pub r0_2: Scalar,
    pub r2_1: Scalar,
    pub r2_2: Scalar,
}

impl CurvatureCoefficients {
    /// `(name, value)` pairs in a fixed order, for reports.
    pub fn named(&self) -> Vec<(&'static str, &Scalar)> {
        vec![
            ("R", &self.r),
            ("W1", &self.w1),
            ("W2", &self.w2),
            ("S1_1", &self.s1_1),
            ("S1_2", &self.s1_2),
            ("S2_1", &self.s2_1),
            ("S2_2", &self.s2_2),
            ("tau1_2", &self.tau1_2),
            ("tau2_1", &self.tau2_1),
            ("R0", &self.r0),
            ("R1", &self.r1),
            ("R2", &self.r2),
            ("W1_0", &self.w1_0),
            ("W1_1", &self.w1_1),
            ("W1_2", &self.w1_2),
            ("W2_0", &self.w2_0),
            ("W2_1", &self.w2_1),
            ("W2_2", &self.w2_2),
            ("R01", &self.r0_1),
            ("R11", &self.r1_1),
            ("R12", &self.r1_2),
            ("R02", &self.r0_2),
            ("R21", &self.r2_1),
            ("R22", &self.r2_2),
        ]
    }
}

fn sum(parts: &[Form]) -> Result<Form> {
    let mut it = parts.iter();
    let mut acc = it.next().expect("non-empty").clone();
    for p in it {
        acc = acc.try_add(p)?;
    }
    Ok(acc)
}

fn mismatch(quantity: &str, lhs: &Scalar, rhs: &Scalar) -> Error {
    Error::CrossCheckMismatch {
        quantity: quantity.to_string(),
        detail: format!("{lhs} != {rhs}"),
    }
}

/// Expands the derivatives of `θ₁¹, τ¹, τ²` and of the resulting
/// coefficients in the lifted coframe. Any `λ` component left over is a
/// shape violation.
pub fn curvature_coefficients(r: &ReductionOutput) -> Result<CurvatureCoefficients> {
    let rel = r.frame.relations();
    let red = |s: Scalar| s.reduce(rel);
    let (th, th1, th2, t11) = (&r.theta, &r.theta1, &r.theta2, &r.theta11);
    let scalar = |s: &Scalar| Form::scalar(&r.frame, s.clone());

    let [rr, w1, w2] = r.expand2(&t11.d(), "d theta11")?;
    let (w1, w2) = (red(w1)?, red(w2)?);
    let rr = red(rr)?;

    let x1 = r.tau1.d().try_sub(&r.tau1.try_wedge(t11)?)?;
    let [c12, c10, c20] = r.expand2(&x1, "d tau1 - tau1^theta11")?;
    if !c12.equals(&-&w2, rel)? {
        return Err(mismatch("theta1^theta2 part of d tau1 - tau1^theta11 = -W2", &c12, &-&w2));
    }
    // θ¹∧θ components carry the opposite sign of θ∧θ¹.
    let (s1_1, s1_2) = (red(-c10)?, red(-c20)?);

    let x2 = r.tau2.d().try_add(&r.tau2.try_wedge(t11)?)?;
    let [c12, c10, c20] = r.expand2(&x2, "d tau2 + tau2^theta11")?;
    if !c12.equals(&-&w1, rel)? {
        return Err(mismatch("theta1^theta2 part of d tau2 + tau2^theta11 = -W1", &c12, &-&w1));
    }
    let (s2_1, s2_2) = (red(-c10)?, red(-c20)?);

    let [r0, r1, r2] = r.expand1(&scalar(&rr).d(), "dR")?;
    let [w1_0, w1_1, w1_2] = r.expand1(&scalar(&w1).d().try_sub(&t11.scale(&w1))?, "dW1 - W1 theta11")?;
    let [w2_0, w2_1, w2_2] = r.expand1(&scalar(&w2).d().try_add(&t11.scale(&w2))?, "dW2 + W2 theta11")?;
    let [r0, r1, r2] = [red(r0)?, red(r1)?, red(r2)?];

    let half = Scalar::ratio(1, 2);
    let (tau1_2, tau2_1) = (r.tau1_2.clone(), r.tau2_1.clone());
    let dr1 = sum(&[
        scalar(&r1).d(),
        -t11.scale(&r1),
        th.scale(&(&r2 * &tau2_1)),
        -th2.scale(&(&half * &r0)),
    ])?;
    let [r0_1, r1_1, r1_2] = r.expand1(&dr1, "dR1 - R1 theta11 + R2 tau2_1 theta - R0 theta2 / 2")?;
    let dr2 = sum(&[
        scalar(&r2).d(),
        t11.scale(&r2),
        th.scale(&(&r1 * &tau1_2)),
        th1.scale(&(&half * &r0)),
    ])?;
    let [r0_2, r2_1, r2_2] = r.expand1(&dr2, "dR2 + R2 theta11 + R1 tau1_2 theta + R0 theta1 / 2")?;

    let out = CurvatureCoefficients {
        r: rr,
        w1,
        w2,
        s1_1,
        s1_2,
        s2_1,
        s2_2,
        tau1_2,
        tau2_1,
        r0,
        r1,
        r2,
        w1_0: red(w1_0)?,
        w1_1: red(w1_1)?,
        w1_2: red(w1_2)?,
        w2_0: red(w2_0)?,
        w2_1: red(w2_1)?,
        w2_2: red(w2_2)?,
        r0_1: red(r0_1)?,
        r1_1: red(r1_1)?,
        r1_2: red(r1_2)?,
        r0_2: red(r0_2)?,
        r2_1: red(r2_1)?,
        r2_2: red(r2_2)?,
    };
    let r0_alt = &out.w1_2 - &out.w2_1;
    if !out.r0.equals(&r0_alt, rel)? {
        return Err(mismatch("R0 = W1_2 - W2_1", &out.r0, &r0_alt));
    }
    let tt = &out.tau1_2 * &out.tau2_1;
    for (q, v) in [("S1_1 = tau1_2 tau2_1", &out.s1_1), ("S2_2 = tau1_2 tau2_1", &out.s2_2)] {
        if !v.equals(&tt, rel)? {
            return Err(mismatch(q, v, &tt));
        }
    }
    Ok(out)
}

/// The connection on the section `φ = 0` together with the scalars that
/// define it.
#[derive(Clone, Debug)]
pub struct EmbeddingData {
    pub connection: ConnectionForms,
    pub c: Scalar,
    pub e1: Scalar,
    pub e2: Scalar,
    pub g: Scalar,
    /// `G` computed from the second identity; equal to `g` modulo relations.
    pub g_alt: Scalar,
}

/// `ω = θ`, `ω¹ = θ¹`, `ω² = θ²`, `φ = 0`, `ω₁¹ = θ₁¹ + cθ`,
/// `φ¹ = cθ¹ + E¹θ + τ¹`, `φ² = −cθ² + E²θ + τ²`, `ψ = E²θ¹ − E¹θ² + Gθ`
/// with `c = −R/4`, `E² = (2/3)(W¹ − R₁/4)`, `E¹ = (2/3)(W² − R₂/4)` and
/// `G = −2(S¹₁ − R₀/3 + R²/16 − (2/3)W²₁ + R₂₁/6)`.
pub fn embed_to_connection(r: &ReductionOutput, k: &CurvatureCoefficients) -> Result<EmbeddingData> {
    let rel = r.frame.relations();
    let q = |p, d| Scalar::ratio(p, d);
    let c = (&q(-1, 4) * &k.r).reduce(rel)?;
    let e2 = (&q(2, 3) * &(&k.w1 - &(&k.r1 * &q(1, 4)))).reduce(rel)?;
    let e1 = (&q(2, 3) * &(&k.w2 - &(&k.r2 * &q(1, 4)))).reduce(rel)?;
    let r_sq = &(&k.r * &k.r) * &q(1, 16);
    let g = (&q(-2, 1)
        * &(&(&(&(&k.s1_1 - &(&k.r0 * &q(1, 3))) + &r_sq) - &(&k.w2_1 * &q(2, 3))) + &(&k.r2_1 * &q(1, 6))))
        .reduce(rel)?;
    let g_alt = (&q(-2, 1)
        * &(&(&(&(&k.s2_2 + &(&k.r0 * &q(1, 3))) + &r_sq) - &(&k.w1_2 * &q(2, 3))) + &(&k.r1_2 * &q(1, 6))))
        .reduce(rel)?;
    if !g.equals(&g_alt, rel)? {
        return Err(mismatch("G (two expressions)", &g, &g_alt));
    }
    let (th, th1, th2) = (&r.theta, &r.theta1, &r.theta2);
    let connection = ConnectionForms::new([
        th.clone(),
        th1.clone(),
        th2.clone(),
        Form::zero(&r.frame, 1),
        r.theta11.try_add(&th.scale(&c))?.reduce()?,
        sum(&[th1.scale(&c), th.scale(&e1), r.tau1.clone()])?.reduce()?,
        sum(&[-th2.scale(&c), th.scale(&e2), r.tau2.clone()])?.reduce()?,
        sum(&[th1.scale(&e2), -th2.scale(&e1), th.scale(&g)])?.reduce()?,
    ])?;
    Ok(EmbeddingData {
        connection,
        c,
        e1,
        e2,
        g,
        g_alt,
    })
}
