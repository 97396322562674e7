use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{Form, FrameSpace};
use crate::matrix::ConnectionForms;
use crate::scalar::{GaussianRational, Scalar, Symbol};

use super::invariants::CurvatureInvariants;
use super::pseudo::{PseudoFlagStructure, ReductionOutput};

/// An antilinear involution on the base frame: symbol images (symbols not
/// listed are real) and the conjugate of every basis form.
#[derive(Clone, Debug, Default)]
pub struct ConjugationSpec {
    pub symbols: HashMap<Symbol, Scalar>,
    pub basis: HashMap<String, Form>,
}

impl ConjugationSpec {
    pub fn new() -> ConjugationSpec {
        ConjugationSpec::default()
    }

    pub fn symbol(mut self, name: &str, image: Scalar) -> ConjugationSpec {
        self.symbols.insert(Symbol::new(name), image);
        self
    }

    pub fn form(mut self, name: &str, image: Form) -> ConjugationSpec {
        self.basis.insert(name.to_string(), image);
        self
    }

    pub fn conj_scalar(&self, s: &Scalar) -> Result<Scalar> {
        s.map(GaussianRational::conj, &self.symbols)
    }
}

struct Conjugation<'a> {
    spec: &'a ConjugationSpec,
    frame: Arc<FrameSpace>,
    images: Vec<Form>,
}

impl Conjugation<'_> {
    fn apply(&self, f: &Form) -> Result<Form> {
        f.map_basis(&self.frame, &self.images, |c| self.spec.conj_scalar(c))
    }

    fn check_involution(&self, what: &str) -> Result<()> {
        let rel = self.frame.relations();
        for (k, e) in self.frame.basis_forms().iter().enumerate() {
            let back = self.apply(&self.images[k])?;
            if !back.equals(e)? {
                return Err(Error::IllFormedInvolution(format!(
                    "conjugating {} twice on the {what} frame gives {}",
                    self.frame.basis_name(k),
                    back.reduce()?
                )));
            }
        }
        for (s, image) in &self.spec.symbols {
            let back = self.spec.conj_scalar(image)?;
            if !back.equals(&Scalar::symbol(*s), rel)? {
                return Err(Error::IllFormedInvolution(format!(
                    "conjugating {} twice gives {back}",
                    s.name()
                )));
            }
        }
        Ok(())
    }

    /// Basis forms and fiber coordinates whose conjugate does not commute
    /// with `d`.
    fn d_failures(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (k, e) in self.frame.basis_forms().iter().enumerate() {
            if !self.apply(&e.d())?.equals(&self.images[k].d())? {
                out.push(format!("d{}", self.frame.basis_name(k)));
            }
        }
        for s in self.frame.fiber_coordinates() {
            let ds = self.frame.differential(s).expect("fiber coordinate");
            let lhs = self.apply(&ds)?;
            let rhs = Form::scalar(&self.frame, self.spec.conj_scalar(&Scalar::symbol(s))?).d();
            if !lhs.equals(&rhs)? {
                out.push(format!("d{}", s.name()));
            }
        }
        Ok(out)
    }
}

/// Outcome of the reality check. The conditions are only evaluated when
/// the premise `θ² = i·conj(θ¹)` holds and the conjugation commutes with `d`.
#[derive(Clone, Debug)]
pub struct RealityReport {
    /// `θ² − i·conj(θ¹)`.
    pub premise: Form,
    /// Differentials that do not commute with the conjugation.
    pub d_incompatible: Vec<String>,
    pub conditions: Option<RealityConditions>,
}

/// Residuals of the four reality conditions.
#[derive(Clone, Debug)]
pub struct RealityConditions {
    /// `ω₁¹ + conj(ω₁¹)`.
    pub omega11: Form,
    /// `ψ − conj(ψ)`.
    pub psi: Form,
    /// `Q¹ − conj(Q²)`.
    pub q: Scalar,
    /// `U₁ + i·conj(U₂)`.
    pub u: Scalar,
}

impl RealityConditions {
    pub fn passed(&self) -> bool {
        self.omega11.is_trivially_zero()
            && self.psi.is_trivially_zero()
            && self.q.is_trivially_zero()
            && self.u.is_trivially_zero()
    }
}

impl RealityReport {
    pub fn premise_holds(&self) -> bool {
        self.premise.is_trivially_zero() && self.d_incompatible.is_empty()
    }

    pub fn conditions_hold(&self) -> bool {
        self.conditions.as_ref().is_some_and(RealityConditions::passed)
    }

    pub fn passed(&self) -> bool {
        self.premise_holds() && self.conditions_hold()
    }
}

/// Lifts the conjugation to the frame of `r` (`conj θ¹ = conj(a)·conj(Z¹)`,
/// `conj θ² = conj(a)⁻¹·conj(Z²)`), checks it is an involution compatible
/// with `d`, and evaluates the reality conditions
/// `ω₁¹ + conj ω₁¹ = 0`, `ψ = conj ψ`, `Q¹ = conj Q²`, `U₁ = −i·conj U₂`.
pub fn check_cr_reality(
    p: &PseudoFlagStructure,
    r: &ReductionOutput,
    c: &ConnectionForms,
    inv: &CurvatureInvariants,
    spec: &ConjugationSpec,
) -> Result<RealityReport> {
    let base = p.frame();
    let mut base_images = Vec::with_capacity(base.dim());
    for name in base.basis_names() {
        let image = spec
            .basis
            .get(&**name)
            .ok_or_else(|| Error::IllFormedInvolution(format!("no conjugate given for {name}")))?;
        if !image.frame().same_frame(base) {
            return Err(Error::FrameMismatch);
        }
        if image.degree() != 1 {
            return Err(Error::IllFormedInvolution(format!("conjugate of {name} is not a 1-form")));
        }
        base_images.push(image.clone());
    }
    for name in spec.basis.keys() {
        base.index_of(name)?;
    }
    let on_base = Conjugation {
        spec,
        frame: base.clone(),
        images: base_images,
    };
    on_base.check_involution("base")?;

    let lift = |f: &Form| f.map_basis(&r.frame, &r.base_images, |s| Ok(s.clone()));
    let a = Scalar::symbol(p.scale());
    let abar = spec.conj_scalar(&a)?;
    let mut lifted_images = Vec::with_capacity(base.dim());
    for (k, name) in base.basis_names().iter().enumerate() {
        let im = lift(&on_base.images[k])?;
        lifted_images.push(if **name == *p.z1() {
            im.scale(&abar)
        } else if **name == *p.z2() {
            im.scale(&abar.inv()?)
        } else {
            im
        });
    }
    let on_lift = Conjugation {
        spec,
        frame: r.frame.clone(),
        images: lifted_images,
    };
    on_lift.check_involution("lifted")?;
    let mut d_incompatible = on_base.d_failures()?;
    d_incompatible.extend(on_lift.d_failures()?);
    d_incompatible.dedup();

    let rel = r.frame.relations();
    let i = Scalar::i();
    let premise = r.theta2.try_sub(&on_lift.apply(&r.theta1)?.scale(&i))?.reduce()?;
    if !premise.is_trivially_zero() || !d_incompatible.is_empty() {
        return Ok(RealityReport {
            premise,
            d_incompatible,
            conditions: None,
        });
    }
    let omega11 = c.omega11.try_add(&on_lift.apply(&c.omega11)?)?.reduce()?;
    let psi = c.psi.try_sub(&on_lift.apply(&c.psi)?)?.reduce()?;
    let q = (&inv.q1 - &spec.conj_scalar(&inv.q2)?).reduce(rel)?;
    let u = (&inv.u1 + &(&i * &spec.conj_scalar(&inv.u2)?)).reduce(rel)?;
    Ok(RealityReport {
        premise,
        d_incompatible,
        conditions: Some(RealityConditions { omega11, psi, q, u }),
    })
}
