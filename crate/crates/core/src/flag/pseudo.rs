use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{Form, FrameBuilder, FrameSpace};
use crate::scalar::{Scalar, Symbol};

/// A contact form with an adapted splitting `dθ = Z¹∧Z²` on a frame that
/// also carries the fiber direction `λ = da/a`.
#[derive(Clone, Debug)]
pub struct PseudoFlagStructure {
    frame: Arc<FrameSpace>,
    contact: String,
    z1: String,
    z2: String,
    lambda: String,
    scale: Symbol,
}

impl PseudoFlagStructure {
    /// Validates the data: four basis forms, `da = a·λ`, `dλ = 0`,
    /// `dθ = Z¹∧Z²` with `dθ∧θ ≠ 0`, and `dZⁱ` free of `λ` and of `a`.
    pub fn new(
        frame: Arc<FrameSpace>,
        contact: &str,
        z1: &str,
        z2: &str,
        lambda: &str,
        scale: &str,
    ) -> Result<PseudoFlagStructure> {
        if frame.dim() != 4 {
            return Err(Error::NotAPseudoFlag(format!(
                "expected four basis forms (contact, Z1, Z2, fiber), found {}",
                frame.dim()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for n in [contact, z1, z2, lambda] {
            frame.index_of(n)?;
            if !seen.insert(n) {
                return Err(Error::NotAPseudoFlag(format!("basis form `{n}` used twice")));
            }
        }
        let a = Symbol::lookup(scale).ok_or_else(|| Error::UnknownSymbol(scale.to_string()))?;
        let lam = frame.basis_form(lambda)?;
        let da = frame
            .differential(a)
            .ok_or_else(|| Error::NotAPseudoFlag(format!("`{scale}` is not a fiber coordinate")))?;
        if !da.equals(&lam.scale(&Scalar::symbol(a)))? {
            return Err(Error::NotAPseudoFlag(format!("d{scale} must equal {scale}*{lambda}, found {da}")));
        }
        if !frame.d_of(lambda)?.is_zero()? {
            return Err(Error::NotAPseudoFlag(format!("d{lambda} must vanish")));
        }
        let theta = frame.basis_form(contact)?;
        let dtheta = frame.d_of(contact)?;
        if dtheta.wedge(&theta).is_zero()? {
            return Err(Error::DegenerateContact);
        }
        let zz = frame.basis_form(z1)?.wedge(&frame.basis_form(z2)?);
        if !dtheta.equals(&zz)? {
            return Err(Error::NotAPseudoFlag(format!(
                "d{contact} must equal {z1}^{z2}, found {}",
                dtheta.reduce()?
            )));
        }
        let lam_bit = 1u32 << frame.index_of(lambda)?;
        for z in [z1, z2] {
            let dz = frame.d_of(z)?;
            for (m, c) in dz.terms() {
                if m & lam_bit != 0 && !c.is_zero(frame.relations())? {
                    return Err(Error::NotAPseudoFlag(format!("d{z} has a {lambda} component")));
                }
                if !c.partial(a).is_zero(frame.relations())? {
                    return Err(Error::NotAPseudoFlag(format!("d{z} depends on the fiber coordinate {scale}")));
                }
            }
        }
        Ok(PseudoFlagStructure {
            frame,
            contact: contact.to_string(),
            z1: z1.to_string(),
            z2: z2.to_string(),
            lambda: lambda.to_string(),
            scale: a,
        })
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn contact(&self) -> &str {
        &self.contact
    }

    pub fn z1(&self) -> &str {
        &self.z1
    }

    pub fn z2(&self) -> &str {
        &self.z2
    }

    pub fn lambda(&self) -> &str {
        &self.lambda
    }

    pub fn scale(&self) -> Symbol {
        self.scale
    }

    /// Names of the lifted forms `θ¹ = a·Z¹`, `θ² = a⁻¹·Z²`.
    pub fn lifted_names(&self) -> (String, String) {
        (format!("{}1", self.contact), format!("{}2", self.contact))
    }

    /// Builds the lifted frame and returns it with the images of the base
    /// basis forms (`Z¹ ↦ a⁻¹θ¹`, `Z² ↦ aθ²`, others unchanged).
    pub fn lift(&self) -> Result<(Arc<FrameSpace>, Vec<Form>)> {
        let (t1, t2) = self.lifted_names();
        let names: Vec<String> = self
            .frame
            .basis_names()
            .iter()
            .map(|n| {
                if **n == *self.z1 {
                    t1.clone()
                } else if **n == *self.z2 {
                    t2.clone()
                } else {
                    n.to_string()
                }
            })
            .collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut b = FrameBuilder::new(&refs)?;
        let sk = b.skeleton().clone();
        let a = Scalar::symbol(self.scale);
        let ia = a.inv()?;
        let images = |frame: &Arc<FrameSpace>| -> Result<Vec<Form>> {
            (0..self.frame.dim())
                .map(|i| {
                    let name = self.frame.basis_name(i);
                    let f = frame.basis_form(&names[i])?;
                    Ok(if name == self.z1 {
                        f.scale(&ia)
                    } else if name == self.z2 {
                        f.scale(&a)
                    } else {
                        f
                    })
                })
                .collect()
        };
        let sk_images = images(&sk)?;
        let lift = |f: &Form| f.map_basis(&sk, &sk_images, |c| Ok(c.clone()));
        let lam = sk.basis_form(&self.lambda)?;
        for (i, name) in self.frame.basis_names().iter().enumerate() {
            let d = lift(&self.frame.d_of(name)?)?;
            let rule = if **name == *self.z1 {
                lam.wedge(&sk.basis_form(&t1)?).try_add(&d.scale(&a))?
            } else if **name == *self.z2 {
                (-&lam.wedge(&sk.basis_form(&t2)?)).try_add(&d.scale(&ia))?
            } else {
                d
            };
            b.d(&names[i], rule)?;
        }
        for s in self.frame.fiber_coordinates() {
            let ds = self.frame.differential(s).expect("fiber");
            b.fiber(&s.name(), lift(&ds)?)?;
        }
        for s in self.frame.declared_constants() {
            b.constant(&s.name())?;
        }
        b.relations(self.frame.relations());
        let lifted = b.build()?;
        let final_images = images(&lifted)?;
        Ok((lifted, final_images))
    }
}

/// `dZⁱ = zⁱ₁₂ Z¹∧Z² + zⁱ₁₀ Z¹∧θ + zⁱ₂₀ Z²∧θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZCoefficients {
    pub z1_12: Scalar,
    pub z1_10: Scalar,
    pub z1_20: Scalar,
    pub z2_12: Scalar,
    pub z2_10: Scalar,
    pub z2_20: Scalar,
}

/// The normalized forms `θ₁¹, τ¹, τ²` on the lifted frame, satisfying
/// `dθ¹ = θ¹∧θ₁¹ + θ∧τ¹`, `dθ² = −θ²∧θ₁¹ + θ∧τ²`, `τ¹ = τ¹₂θ²`, `τ² = τ²₁θ¹`.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub frame: Arc<FrameSpace>,
    /// `θ, θ¹, θ², λ` on the lifted frame.
    pub theta: Form,
    pub theta1: Form,
    pub theta2: Form,
    pub lambda: Form,
    pub theta11: Form,
    pub tau1: Form,
    pub tau2: Form,
    pub z: ZCoefficients,
    /// `τ¹₂`, the `θ²` coefficient of `τ¹`.
    pub tau1_2: Scalar,
    /// `τ²₁`, the `θ¹` coefficient of `τ²`.
    pub tau2_1: Scalar,
    /// Images of the base basis forms in the lifted frame.
    pub base_images: Vec<Form>,
    pub scale: Symbol,
}

impl ReductionOutput {
    pub(crate) fn names(&self) -> [String; 4] {
        [&self.theta, &self.theta1, &self.theta2, &self.lambda].map(|f| {
            let (m, _) = f.terms().next().expect("basis form");
            self.frame.basis_name(m.trailing_zeros() as usize).to_string()
        })
    }

    /// Coefficients of a 1-form along `θ, θ¹, θ²`; a nonzero `λ` part is a
    /// shape violation.
    pub(crate) fn expand1(&self, f: &Form, label: &str) -> Result<[Scalar; 3]> {
        let n = self.names();
        let out = [
            f.coefficient(&[&n[0]])?,
            f.coefficient(&[&n[1]])?,
            f.coefficient(&[&n[2]])?,
        ];
        let rest = f.coefficient(&[&n[3]])?;
        if !rest.is_zero(self.frame.relations())? {
            return Err(Error::shape(label, format!("unexpected {} component {}", n[3], rest)));
        }
        Ok(out)
    }

    /// Coefficients of a 2-form along `θ¹∧θ², θ¹∧θ, θ²∧θ`; other components
    /// must vanish.
    pub(crate) fn expand2(&self, f: &Form, label: &str) -> Result<[Scalar; 3]> {
        let n = self.names();
        let out = [
            f.coefficient(&[&n[1], &n[2]])?,
            f.coefficient(&[&n[1], &n[0]])?,
            f.coefficient(&[&n[2], &n[0]])?,
        ];
        let rel = self.frame.relations();
        for other in [[&n[0], &n[3]], [&n[1], &n[3]], [&n[2], &n[3]]] {
            let c = f.coefficient(&[other[0], other[1]])?;
            if !c.is_zero(rel)? {
                return Err(Error::shape(
                    label,
                    format!("unexpected {}^{} component {}", other[0], other[1], c),
                ));
            }
        }
        Ok(out)
    }
}

/// Forms satisfying the two structure equations before the normalization
/// `τ¹₁ = 0`.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub theta11: Form,
    pub tau1: Form,
    pub tau2: Form,
}

/// The unnormalized solution
/// `θ₁¹ = −λ + z¹₁₂Z² + z²₁₂Z¹`, `τ¹ = −z¹₁₀θ¹ − z¹₂₀a²θ²`,
/// `τ² = −z²₁₀a⁻²θ¹ − z²₂₀θ²`, together with the lifted frame.
pub fn candidate(p: &PseudoFlagStructure) -> Result<(ReductionOutput, Candidate)> {
    let base = p.frame();
    let (c, z1, z2) = (p.contact(), p.z1(), p.z2());
    let coeffs = |z: &str| -> Result<[Scalar; 3]> {
        let dz = base.d_of(z)?;
        Ok([
            dz.coefficient(&[z1, z2])?,
            dz.coefficient(&[z1, c])?,
            dz.coefficient(&[z2, c])?,
        ])
    };
    let [z1_12, z1_10, z1_20] = coeffs(z1)?;
    let [z2_12, z2_10, z2_20] = coeffs(z2)?;
    for (z, known) in [(z1, [&z1_12, &z1_10, &z1_20]), (z2, [&z2_12, &z2_10, &z2_20])] {
        let dz = base.d_of(z)?;
        let zz = base.basis_form(z1)?.wedge(&base.basis_form(z2)?);
        let z1t = base.basis_form(z1)?.wedge(&base.basis_form(c)?);
        let z2t = base.basis_form(z2)?.wedge(&base.basis_form(c)?);
        let rest = dz
            .try_sub(&zz.scale(known[0]))?
            .try_sub(&z1t.scale(known[1]))?
            .try_sub(&z2t.scale(known[2]))?;
        if !rest.is_zero()? {
            return Err(Error::NotAPseudoFlag(format!("d{z} has disallowed terms {}", rest.reduce()?)));
        }
    }

    let (lifted, images) = p.lift()?;
    let (t1n, t2n) = p.lifted_names();
    let theta = lifted.basis_form(c)?;
    let theta1 = lifted.basis_form(&t1n)?;
    let theta2 = lifted.basis_form(&t2n)?;
    let lambda = lifted.basis_form(p.lambda())?;
    let a = Scalar::symbol(p.scale());
    let ia = a.inv()?;
    let a2 = a.pow(2)?;
    let ia2 = a.pow(-2)?;
    let zz1 = theta1.scale(&ia);
    let zz2 = theta2.scale(&a);

    let theta11 = (-&lambda).try_add(&zz2.scale(&z1_12))?.try_add(&zz1.scale(&z2_12))?;
    let tau1 = theta1.scale(&-&z1_10).try_sub(&theta2.scale(&(&z1_20 * &a2)))?;
    let tau2 = theta1.scale(&-(&z2_10 * &ia2)).try_sub(&theta2.scale(&z2_20))?;

    let out = ReductionOutput {
        frame: lifted,
        theta,
        theta1,
        theta2,
        lambda,
        theta11: theta11.clone(),
        tau1: tau1.clone(),
        tau2: tau2.clone(),
        z: ZCoefficients {
            z1_12,
            z1_10,
            z1_20,
            z2_12,
            z2_10,
            z2_20,
        },
        tau1_2: Scalar::zero(),
        tau2_1: Scalar::zero(),
        base_images: images,
        scale: p.scale(),
    };
    Ok((out, Candidate { theta11, tau1, tau2 }))
}

/// Applies the unique shift `θ₁¹ += Aθ`, `τ¹ += Aθ¹`, `τ² −= Aθ²` with
/// `A = −τ¹₁`, then verifies both structure equations and `τ²₂ = 0`.
pub fn normalize(template: &ReductionOutput, cand: &Candidate) -> Result<ReductionOutput> {
    let r = template;
    let n = r.names();
    let big_a = -cand.tau1.coefficient(&[&n[1]])?;
    let theta11 = cand.theta11.try_add(&r.theta.scale(&big_a))?.reduce()?;
    let tau1 = cand.tau1.try_add(&r.theta1.scale(&big_a))?.reduce()?;
    let tau2 = cand.tau2.try_sub(&r.theta2.scale(&big_a))?.reduce()?;

    let first = r
        .theta1
        .d()
        .try_sub(&r.theta1.try_wedge(&theta11)?)?
        .try_sub(&r.theta.try_wedge(&tau1)?)?;
    if !first.is_zero()? {
        return Err(Error::shape("d theta1 = theta1^theta11 + theta^tau1", first.reduce()?.to_string()));
    }
    let second = r
        .theta2
        .d()
        .try_add(&r.theta2.try_wedge(&theta11)?)?
        .try_sub(&r.theta.try_wedge(&tau2)?)?;
    if !second.is_zero()? {
        return Err(Error::shape("d theta2 = -theta2^theta11 + theta^tau2", second.reduce()?.to_string()));
    }
    let [t1_0, t1_1, t1_2] = r.expand1(&tau1, "tau1")?;
    let [t2_0, t2_1, t2_2] = r.expand1(&tau2, "tau2")?;
    let rel = r.frame.relations();
    for (label, v) in [("tau1 theta component", &t1_0), ("tau1_1", &t1_1), ("tau2 theta component", &t2_0), ("tau2_2", &t2_2)] {
        if !v.is_zero(rel)? {
            return Err(Error::shape("normalized tau", format!("{label} = {v} should vanish")));
        }
    }
    Ok(ReductionOutput {
        theta11,
        tau1,
        tau2,
        tau1_2: t1_2.reduce(rel)?,
        tau2_1: t2_1.reduce(rel)?,
        ..r.clone()
    })
}

/// Computes the unique normalized `θ₁¹, τ¹, τ²`.
pub fn reduce_pseudo_flag(p: &PseudoFlagStructure) -> Result<ReductionOutput> {
    let (template, cand) = candidate(p)?;
    normalize(&template, &cand)
}

impl ReductionOutput {
    /// The output viewed as a candidate again (for idempotence checks).
    pub fn as_candidate(&self) -> Candidate {
        Candidate {
            theta11: self.theta11.clone(),
            tau1: self.tau1.clone(),
            tau2: self.tau2.clone(),
        }
    }
}

