use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::{add_into, wedge_terms, Form, Terms};
use crate::error::{Error, Result};
use crate::scalar::{RelationSet, Scalar, Symbol};

/// Largest supported basis; multi-indices are `u32` bitmasks.
pub const MAX_BASIS: usize = 30;

static NEXT_FRAME_ID: AtomicU64 = AtomicU64::new(1);

/// A coframe: ordered basis 1-forms with their exterior derivatives, fiber
/// coordinates with their differentials, and algebraic relations among the
/// symbols.
pub struct FrameSpace {
    id: u64,
    basis: Vec<Arc<str>>,
    index: HashMap<Arc<str>, usize>,
    d_basis: Vec<Terms>,
    fibers: BTreeMap<Symbol, Terms>,
    constants: BTreeSet<Symbol>,
    relations: RelationSet,
}

impl FrameSpace {
    fn skeleton(names: &[&str]) -> Result<FrameSpace> {
        if names.len() > MAX_BASIS {
            return Err(Error::InvalidFrame(format!(
                "{} basis forms requested, at most {MAX_BASIS} supported",
                names.len()
            )));
        }
        let mut index = HashMap::new();
        let mut basis = Vec::new();
        for (k, &n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::InvalidFrame("empty basis name".into()));
            }
            let name: Arc<str> = Arc::from(n);
            if index.insert(name.clone(), k).is_some() {
                return Err(Error::InvalidFrame(format!("basis form `{n}` declared twice")));
            }
            basis.push(name);
        }
        Ok(FrameSpace {
            id: NEXT_FRAME_ID.fetch_add(1, Ordering::Relaxed),
            d_basis: vec![Terms::new(); basis.len()],
            basis,
            index,
            fibers: BTreeMap::new(),
            constants: BTreeSet::new(),
            relations: RelationSet::new(),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[Arc<str>] {
        &self.basis
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.basis[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn fiber_coordinates(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.fibers.keys().copied()
    }

    /// Symbols declared constant. Undeclared symbols are constant too.
    pub fn declared_constants(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.constants.iter().copied()
    }

    pub fn is_fiber(&self, s: Symbol) -> bool {
        self.fibers.contains_key(&s)
    }

    pub fn same_frame(&self, other: &FrameSpace) -> bool {
        self.id == other.id
    }

    /// Exterior derivative of the basis monomial `mask`, by the graded
    /// Leibniz rule over the lowest index.
    pub(crate) fn d_mask(&self, mask: u32) -> Terms {
        if mask == 0 {
            return Terms::new();
        }
        let i = mask.trailing_zeros();
        let head = 1u32 << i;
        let rest = mask & !head;
        let mut head_terms = Terms::new();
        head_terms.insert(head, Scalar::one());
        let mut rest_terms = Terms::new();
        rest_terms.insert(rest, Scalar::one());

        let mut out = wedge_terms(&self.d_basis[i as usize], &rest_terms);
        if rest != 0 {
            for (m, c) in wedge_terms(&head_terms, &self.d_mask(rest)) {
                add_into(&mut out, m, -c);
            }
        }
        out
    }

    /// Differential of a scalar: `df = Σ ∂f/∂s ds` over fiber coordinates.
    pub(crate) fn d_scalar(&self, f: &Scalar) -> Terms {
        let mut out = Terms::new();
        if self.fibers.is_empty() {
            return out;
        }
        for s in f.symbols() {
            if let Some(ds) = self.fibers.get(&s) {
                let df = f.partial(s);
                if df.is_trivially_zero() {
                    continue;
                }
                for (&m, c) in ds {
                    add_into(&mut out, m, &df * c);
                }
            }
        }
        out
    }

    /// The basis 1-form named `name`.
    pub fn basis_form(self: &Arc<Self>, name: &str) -> Result<Form> {
        let i = self.index_of(name)?;
        Ok(Form::basis(self, i))
    }

    /// All basis 1-forms in order.
    pub fn basis_forms(self: &Arc<Self>) -> Vec<Form> {
        (0..self.dim()).map(|i| Form::basis(self, i)).collect()
    }

    /// Structural `d` of basis form `name`.
    pub fn d_of(self: &Arc<Self>, name: &str) -> Result<Form> {
        let i = self.index_of(name)?;
        Ok(Form::from_terms(self, 2, self.d_basis[i].clone()))
    }

    /// Differential of a fiber coordinate, `None` for constants.
    pub fn differential(self: &Arc<Self>, s: Symbol) -> Option<Form> {
        self.fibers
            .get(&s)
            .map(|t| Form::from_terms(self, 1, t.clone()))
    }

    /// Same structure with additional relations. The result is a distinct
    /// frame; forms must be rebased onto it.
    pub fn with_relations(&self, extra: &RelationSet) -> Arc<FrameSpace> {
        Arc::new(FrameSpace {
            id: NEXT_FRAME_ID.fetch_add(1, Ordering::Relaxed),
            basis: self.basis.clone(),
            index: self.index.clone(),
            d_basis: self.d_basis.clone(),
            fibers: self.fibers.clone(),
            constants: self.constants.clone(),
            relations: self.relations.merged(extra),
        })
    }

    /// Builder for a frame with extra basis forms appended, carrying over
    /// every d-rule, fiber coordinate, constant and relation of this frame.
    /// New basis forms start closed.
    pub fn extend(self: &Arc<Self>, extra_basis: &[&str]) -> Result<FrameBuilder> {
        let mut names: Vec<&str> = self.basis.iter().map(|s| &**s).collect();
        names.extend_from_slice(extra_basis);
        let mut b = FrameBuilder::new(&names)?;
        let sk = b.skeleton().clone();
        for (i, name) in self.basis.iter().enumerate() {
            let d = Form::from_terms(self, 2, self.d_basis[i].clone()).transport(&sk)?;
            b.d(name, d)?;
        }
        for (&s, t) in &self.fibers {
            let ds = Form::from_terms(self, 1, t.clone()).transport(&sk)?;
            b.fiber(&s.name(), ds)?;
        }
        for &c in &self.constants {
            b.constant(&c.name())?;
        }
        b.relations(&self.relations);
        Ok(b)
    }

    /// Frame with the same basis and no structure, for building forms
    /// before the structure is known.
    pub fn builder_like(&self) -> FrameBuilder {
        let names: Vec<&str> = self.basis.iter().map(|s| &**s).collect();
        FrameBuilder::new(&names).expect("names already validated")
    }
}

impl fmt::Debug for FrameSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FrameSpace#{}(", self.id)?;
        for (k, n) in self.basis.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str(n)?;
        }
        f.write_str(")")
    }
}

/// Assembles a [`FrameSpace`].
///
/// Forms used to describe the structure live on [`FrameBuilder::skeleton`],
/// a frame with the final basis but no differentials yet.
///
/// ```
/// use flagcalc_core::{FrameBuilder, Scalar};
/// let mut b = FrameBuilder::new(&["alpha", "beta", "gamma"]).unwrap();
/// let (al, be, ga) = (b.basis("alpha").unwrap(), b.basis("beta").unwrap(), b.basis("gamma").unwrap());
/// b.d("alpha", -&be.wedge(&ga)).unwrap();
/// b.d("beta", -&ga.wedge(&al)).unwrap();
/// b.d("gamma", -&al.wedge(&be)).unwrap();
/// let frame = b.build().unwrap();
/// assert_eq!(frame.dim(), 3);
/// ```
pub struct FrameBuilder {
    skeleton: Arc<FrameSpace>,
    d_basis: Vec<Terms>,
    fibers: BTreeMap<Symbol, Terms>,
    constants: BTreeSet<Symbol>,
    relations: RelationSet,
}

impl FrameBuilder {
    pub fn new(names: &[&str]) -> Result<FrameBuilder> {
        let skeleton = Arc::new(FrameSpace::skeleton(names)?);
        Ok(FrameBuilder {
            d_basis: vec![Terms::new(); names.len()],
            skeleton,
            fibers: BTreeMap::new(),
            constants: BTreeSet::new(),
            relations: RelationSet::new(),
        })
    }

    pub fn skeleton(&self) -> &Arc<FrameSpace> {
        &self.skeleton
    }

    pub fn basis(&self, name: &str) -> Result<Form> {
        self.skeleton.basis_form(name)
    }

    fn own(&self, form: &Form, degree: usize) -> Result<()> {
        if !form.frame().same_frame(&self.skeleton) {
            return Err(Error::FrameMismatch);
        }
        if form.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: form.degree(),
            });
        }
        Ok(())
    }

    /// Sets the exterior derivative of a basis form.
    pub fn d(&mut self, name: &str, form: Form) -> Result<()> {
        let i = self.skeleton.index_of(name)?;
        self.own(&form, 2)?;
        self.d_basis[i] = form.into_terms();
        Ok(())
    }

    /// Declares `name` a fiber coordinate with the given differential.
    pub fn fiber(&mut self, name: &str, differential: Form) -> Result<()> {
        self.own(&differential, 1)?;
        let s = Symbol::new(name);
        if self.constants.contains(&s) {
            return Err(Error::InvalidFrame(format!("`{name}` is already a constant")));
        }
        self.fibers.insert(s, differential.into_terms());
        Ok(())
    }

    pub fn constant(&mut self, name: &str) -> Result<()> {
        let s = Symbol::new(name);
        if self.fibers.contains_key(&s) {
            return Err(Error::InvalidFrame(format!("`{name}` is already a fiber coordinate")));
        }
        self.constants.insert(s);
        Ok(())
    }

    /// Adds the relation `expr = 0`.
    pub fn relation(&mut self, expr: &Scalar) -> Result<()> {
        self.relations.add_scalar(expr)
    }

    pub fn relations(&mut self, rel: &RelationSet) {
        self.relations = self.relations.merged(rel);
    }

    pub fn build_unchecked(self) -> Arc<FrameSpace> {
        let mut frame = FrameSpace::skeleton(
            &self.skeleton.basis.iter().map(|s| &**s).collect::<Vec<_>>(),
        )
        .expect("names already validated");
        frame.d_basis = self.d_basis;
        frame.fibers = self.fibers;
        frame.constants = self.constants;
        frame.relations = self.relations;
        Arc::new(frame)
    }

    /// Builds the frame and verifies `d² = 0` on the basis and the fiber
    /// coordinates, and that `d` preserves the relations.
    pub fn build(self) -> Result<Arc<FrameSpace>> {
        let frame = self.build_unchecked();
        let report = super::check_frame_consistency(&frame)?;
        if !report.is_consistent() {
            return Err(Error::InconsistentFrame(report.to_string()));
        }
        Ok(frame)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_and_oversized_bases() {
        assert!(matches!(FrameBuilder::new(&["a", "a"]), Err(Error::InvalidFrame(_))));
        let names: Vec<String> = (0..31).map(|k| format!("e{k}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        assert!(matches!(FrameBuilder::new(&refs), Err(Error::InvalidFrame(_))));
        assert!(FrameBuilder::new(&refs[..30]).is_ok());
    }

    #[test]
    fn unknown_basis() {
        let b = FrameBuilder::new(&["e1"]).unwrap();
        assert_eq!(b.basis("e2").unwrap_err(), Error::UnknownBasis("e2".into()));
    }

    #[test]
    fn inconsistent_frame_is_rejected() {
        // d e1 = e2 ∧ e3, d e2 = e1 ∧ e2, d e3 = 0 gives d(d e1) = e1 ∧ e2 ∧ e3.
        let mut b = FrameBuilder::new(&["e1", "e2", "e3"]).unwrap();
        let (e1, e2, e3) = (b.basis("e1").unwrap(), b.basis("e2").unwrap(), b.basis("e3").unwrap());
        b.d("e1", e2.wedge(&e3)).unwrap();
        b.d("e2", e1.wedge(&e2)).unwrap();
        assert!(matches!(b.build(), Err(Error::InconsistentFrame(_))));
    }

    #[test]
    fn fiber_coordinate_differential() {
        let mut b = FrameBuilder::new(&["th", "lam"]).unwrap();
        let lam = b.basis("lam").unwrap();
        let a = Scalar::var("frm_a");
        b.fiber("frm_a", lam.scale(&a)).unwrap();
        let frame = b.build().unwrap();
        let f = Form::scalar(&frame, a.pow(3).unwrap());
        let expect = frame.basis_form("lam").unwrap().scale(&(&Scalar::from_int(3) * &a.pow(3).unwrap()));
        assert!(f.d().equals(&expect).unwrap());
    }
}
