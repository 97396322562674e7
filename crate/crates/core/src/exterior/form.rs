use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{add_into, wedge_terms, FrameSpace, Terms};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Symbol};

/// Homogeneous differential form on a [`FrameSpace`].
///
/// Coefficients are stored as computed, without reduction modulo the frame
/// relations; [`Form::is_zero`] and [`Form::reduce`] apply them.
#[derive(Clone)]
pub struct Form {
    frame: Arc<FrameSpace>,
    degree: usize,
    terms: Terms,
}

impl Form {
    pub fn zero(frame: &Arc<FrameSpace>, degree: usize) -> Form {
        Form {
            frame: frame.clone(),
            degree,
            terms: Terms::new(),
        }
    }

    /// A 0-form.
    pub fn scalar(frame: &Arc<FrameSpace>, f: Scalar) -> Form {
        let mut terms = Terms::new();
        add_into(&mut terms, 0, f);
        Form {
            frame: frame.clone(),
            degree: 0,
            terms,
        }
    }

    pub(crate) fn basis(frame: &Arc<FrameSpace>, i: usize) -> Form {
        let mut terms = Terms::new();
        terms.insert(1u32 << i, Scalar::one());
        Form {
            frame: frame.clone(),
            degree: 1,
            terms,
        }
    }

    pub(crate) fn from_terms(frame: &Arc<FrameSpace>, degree: usize, terms: Terms) -> Form {
        debug_assert!(terms.keys().all(|m| m.count_ones() as usize == degree));
        Form {
            frame: frame.clone(),
            degree,
            terms,
        }
    }

    /// Builds `Σ c · e_{names}`; each entry lists basis names in any order.
    pub fn from_components(
        frame: &Arc<FrameSpace>,
        degree: usize,
        components: &[(&[&str], Scalar)],
    ) -> Result<Form> {
        let mut out = Form::zero(frame, degree);
        for (names, c) in components {
            let (mask, sign) = frame_mask(frame, names, degree)?;
            if sign != 0 {
                add_into(&mut out.terms, mask, if sign > 0 { c.clone() } else { -c });
            }
        }
        Ok(out)
    }

    pub fn frame(&self) -> &Arc<FrameSpace> {
        &self.frame
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Raw terms keyed by basis bitmask (bit `k` is basis form `k`).
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub(crate) fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_trivially_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero modulo the frame relations.
    pub fn is_zero(&self) -> Result<bool> {
        let rel = self.frame.relations();
        for c in self.terms.values() {
            if !c.is_zero(rel)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality modulo the frame relations.
    pub fn equals(&self, other: &Form) -> Result<bool> {
        self.try_sub(other)?.is_zero()
    }

    /// Coefficients reduced modulo the frame relations, zeros dropped.
    pub fn reduce(&self) -> Result<Form> {
        let rel = self.frame.relations();
        let mut terms = Terms::new();
        for (&m, c) in &self.terms {
            let r = c.reduce(rel)?;
            if !r.is_trivially_zero() {
                terms.insert(m, r);
            }
        }
        Ok(Form::from_terms(&self.frame, self.degree, terms))
    }

    /// Coefficient of the wedge of the named basis forms, signed according
    /// to the given order.
    pub fn coefficient(&self, names: &[&str]) -> Result<Scalar> {
        let (mask, sign) = frame_mask(&self.frame, names, self.degree)?;
        Ok(match (sign, self.terms.get(&mask)) {
            (0, _) | (_, None) => Scalar::zero(),
            (1, Some(c)) => c.clone(),
            (_, Some(c)) => -c,
        })
    }

    pub fn coefficient_mask(&self, mask: u32) -> Scalar {
        self.terms.get(&mask).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The coefficient of a 0-form.
    pub fn as_scalar(&self) -> Result<Scalar> {
        if self.degree != 0 {
            return Err(Error::DegreeMismatch {
                expected: 0,
                found: self.degree,
            });
        }
        Ok(self.coefficient_mask(0))
    }

    fn check_frame(&self, other: &Form) -> Result<()> {
        if self.frame.same_frame(&other.frame) {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    pub fn try_wedge(&self, other: &Form) -> Result<Form> {
        self.check_frame(other)?;
        Ok(Form::from_terms(
            &self.frame,
            self.degree + other.degree,
            wedge_terms(&self.terms, &other.terms),
        ))
    }

    /// Wedge product. Panics when the frames differ; see [`Form::try_wedge`].
    pub fn wedge(&self, other: &Form) -> Form {
        self.try_wedge(other).expect("wedge of forms on different frames")
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_frame(other)?;
        if self.degree != other.degree && !self.terms.is_empty() && !other.terms.is_empty() {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let degree = if self.terms.is_empty() { other.degree } else { self.degree };
        let mut terms = self.terms.clone();
        for (&m, c) in &other.terms {
            add_into(&mut terms, m, c.clone());
        }
        Ok(Form::from_terms(&self.frame, degree, terms))
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.try_add(&-other)
    }

    pub fn scale(&self, f: &Scalar) -> Form {
        let mut terms = Terms::new();
        if !f.is_trivially_zero() {
            for (&m, c) in &self.terms {
                add_into(&mut terms, m, c * f);
            }
        }
        Form::from_terms(&self.frame, self.degree, terms)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut out = Terms::new();
        for (&m, c) in &self.terms {
            let df = self.frame.d_scalar(c);
            if !df.is_empty() {
                let mut basis = Terms::new();
                basis.insert(m, Scalar::one());
                for (mm, cc) in wedge_terms(&df, &basis) {
                    add_into(&mut out, mm, cc);
                }
            }
            if m != 0 {
                for (mm, cc) in self.frame.d_mask(m) {
                    add_into(&mut out, mm, &cc * c);
                }
            }
        }
        Form::from_terms(&self.frame, self.degree + 1, out)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Form> {
        let mut terms = Terms::new();
        for (&m, c) in &self.terms {
            add_into(&mut terms, m, f(c)?);
        }
        Ok(Form::from_terms(&self.frame, self.degree, terms))
    }

    /// Substitutes symbols in every coefficient.
    pub fn substitute(&self, bindings: &HashMap<Symbol, Scalar>) -> Result<Form> {
        self.map_coefficients(|c| c.substitute(bindings))
    }

    /// The same form on another frame with an identical basis.
    pub fn rebase(&self, target: &Arc<FrameSpace>) -> Result<Form> {
        if self.frame.same_frame(target) {
            return Ok(self.clone());
        }
        if self.frame.basis_names() != target.basis_names() {
            return Err(Error::FrameMismatch);
        }
        Ok(Form::from_terms(target, self.degree, self.terms.clone()))
    }

    /// The same form on a frame whose basis contains every basis name of
    /// this one (in any order), e.g. an extension by extra basis forms.
    pub fn transport(&self, target: &Arc<FrameSpace>) -> Result<Form> {
        if self.frame.same_frame(target) {
            return Ok(self.clone());
        }
        let images = self
            .frame
            .basis_names()
            .iter()
            .map(|n| target.basis_form(n))
            .collect::<Result<Vec<_>>>()?;
        self.map_basis(target, &images, |c| Ok(c.clone()))
    }

    /// Linear substitution of basis forms: basis form `k` of this frame is
    /// replaced by `images[k]` (1-forms on `target`) and every coefficient by
    /// `coeff(c)`.
    pub fn map_basis(
        &self,
        target: &Arc<FrameSpace>,
        images: &[Form],
        coeff: impl Fn(&Scalar) -> Result<Scalar>,
    ) -> Result<Form> {
        if images.len() != self.frame.dim() {
            return Err(Error::InvalidFrame(format!(
                "{} basis images given for a frame of dimension {}",
                images.len(),
                self.frame.dim()
            )));
        }
        for im in images {
            if !im.frame.same_frame(target) {
                return Err(Error::FrameMismatch);
            }
            if im.degree != 1 && !im.terms.is_empty() {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    found: im.degree,
                });
            }
        }
        let mut out = Terms::new();
        for (&m, c) in &self.terms {
            let mut prod = Terms::new();
            prod.insert(0, coeff(c)?);
            let mut rest = m;
            while rest != 0 && !prod.is_empty() {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                prod = wedge_terms(&prod, &images[k].terms);
            }
            for (mm, cc) in prod {
                add_into(&mut out, mm, cc);
            }
        }
        Ok(Form::from_terms(target, self.degree, out))
    }

    /// Writes `self = Σ xᵢ·generators[i] + residual` by exact elimination over
    /// the coefficient field (modulo the frame relations). The residual is
    /// zero exactly when `self` lies in the span; unknowns without a pivot
    /// are set to zero.
    pub fn decompose(&self, generators: &[Form]) -> Result<(Vec<Scalar>, Form)> {
        for g in generators {
            self.check_frame(g)?;
            if g.degree != self.degree && !g.terms.is_empty() {
                return Err(Error::DegreeMismatch {
                    expected: self.degree,
                    found: g.degree,
                });
            }
        }
        let rel = self.frame.relations();
        let k = generators.len();
        let mut masks: Vec<u32> = self.terms.keys().copied().collect();
        for g in generators {
            masks.extend(g.terms.keys().copied());
        }
        masks.sort_unstable();
        masks.dedup();
        // rows: [g_0[m], ..., g_{k-1}[m], target[m]]
        let mut rows: Vec<Vec<Scalar>> = masks
            .iter()
            .map(|&m| {
                let mut r: Vec<Scalar> = generators.iter().map(|g| g.coefficient_mask(m)).collect();
                r.push(self.coefficient_mask(m));
                r
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut next_row = 0;
        for col in 0..k {
            let mut found = None;
            for (r, row) in rows.iter().enumerate().skip(next_row) {
                if !row[col].is_zero(rel)? {
                    found = Some(r);
                    break;
                }
            }
            let Some(r) = found else { continue };
            rows.swap(next_row, r);
            let inv = rows[next_row][col].inv()?;
            let pivot_row: Vec<Scalar> = rows[next_row].iter().map(|x| x * &inv).collect();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == next_row || row[col].is_trivially_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_trivially_zero() {
                        *x = &*x - &(&f * p);
                    }
                }
            }
            rows[next_row] = pivot_row;
            pivots.push((next_row, col));
            next_row += 1;
        }
        let mut x = vec![Scalar::zero(); k];
        for &(r, col) in &pivots {
            x[col] = rows[r][k].reduce(rel)?;
        }
        let mut residual = self.clone();
        for (xi, g) in x.iter().zip(generators) {
            residual = residual.try_sub(&g.scale(xi))?;
        }
        Ok((x, residual.reduce()?))
    }

    /// Drops every term containing one of the named basis forms and applies
    /// `bindings` to the coefficients: the restriction to a section along
    /// which those forms vanish.
    pub fn restrict(&self, killed: &[&str], bindings: &HashMap<Symbol, Scalar>) -> Result<Form> {
        let mut kill = 0u32;
        for n in killed {
            kill |= 1 << self.frame.index_of(n)?;
        }
        let mut terms = Terms::new();
        for (&m, c) in &self.terms {
            if m & kill == 0 {
                add_into(&mut terms, m, c.substitute(bindings)?);
            }
        }
        Ok(Form::from_terms(&self.frame, self.degree, terms))
    }
}

fn frame_mask(frame: &FrameSpace, names: &[&str], degree: usize) -> Result<(u32, i32)> {
    if names.len() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: names.len(),
        });
    }
    let mut idx = Vec::with_capacity(names.len());
    for n in names {
        idx.push(frame.index_of(n)?);
    }
    let mut sign = 1;
    let mut mask = 0u32;
    for (k, &i) in idx.iter().enumerate() {
        if mask & (1 << i) != 0 {
            return Ok((0, 0));
        }
        mask |= 1 << i;
        if idx[..k].iter().filter(|&&j| j > i).count() % 2 == 1 {
            sign = -sign;
        }
    }
    Ok((mask, sign))
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("sum of incompatible forms")
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_sub(rhs).expect("difference of incompatible forms")
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        let terms = self.terms.iter().map(|(&m, c)| (m, -c)).collect();
        Form::from_terms(&self.frame, self.degree, terms)
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl Mul<&Scalar> for &Form {
    type Output = Form;
    fn mul(self, rhs: &Scalar) -> Form {
        self.scale(rhs)
    }
}

impl Mul<&Form> for &Scalar {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        rhs.scale(self)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&m, c)) in self.terms.iter().enumerate() {
            let mut coef = c.to_string();
            // A single term with a monomial denominator prints without `+`.
            let simple = c.numerator().len() == 1
                && c.denominator().as_term().is_some_and(|(k, _)| k.is_one());
            if k > 0 {
                if simple && coef.starts_with('-') {
                    f.write_str(" - ")?;
                    coef.remove(0);
                } else {
                    f.write_str(" + ")?;
                }
            }
            if m == 0 {
                f.write_str(&coef)?;
                continue;
            }
            match coef.as_str() {
                "1" => {}
                "-1" => f.write_str("-")?,
                _ if simple => write!(f, "{coef}*")?,
                _ => write!(f, "({coef})*")?,
            }
            let mut first = true;
            let mut rest = m;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if !first {
                    f.write_str("^")?;
                }
                first = false;
                f.write_str(self.frame.basis_name(i))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::FrameBuilder;

    fn su2() -> Arc<FrameSpace> {
        let mut b = FrameBuilder::new(&["al", "be", "ga"]).unwrap();
        let (al, be, ga) = (b.basis("al").unwrap(), b.basis("be").unwrap(), b.basis("ga").unwrap());
        b.d("al", -&be.wedge(&ga)).unwrap();
        b.d("be", -&ga.wedge(&al)).unwrap();
        b.d("ga", -&al.wedge(&be)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn d_squared_vanishes_on_su2() {
        let f = su2();
        for e in f.basis_forms() {
            assert!(e.d().d().is_zero().unwrap());
        }
    }

    #[test]
    fn coefficient_sign_and_degree() {
        let f = su2();
        let (al, be) = (f.basis_form("al").unwrap(), f.basis_form("be").unwrap());
        let w = al.wedge(&be);
        assert_eq!(w.coefficient(&["al", "be"]).unwrap(), Scalar::one());
        assert_eq!(w.coefficient(&["be", "al"]).unwrap(), Scalar::from_int(-1));
        assert_eq!(
            w.coefficient(&["al"]),
            Err(Error::DegreeMismatch { expected: 2, found: 1 })
        );
        assert!(al.wedge(&al).is_trivially_zero());
    }

    #[test]
    fn frame_mismatch() {
        let (f, g) = (su2(), su2());
        let a = f.basis_form("al").unwrap();
        let b = g.basis_form("al").unwrap();
        assert_eq!(a.try_wedge(&b).unwrap_err(), Error::FrameMismatch);
        assert!(a.try_wedge(&b.rebase(&f).unwrap()).is_ok());
    }

    #[test]
    fn decomposition() {
        let f = su2();
        let e = f.basis_forms();
        let x = Scalar::var("frm_x");
        let g1 = &e[0] + &e[1].scale(&x);
        let g2 = e[2].clone();
        let target = &g1.scale(&Scalar::from_int(3)) - &g2.scale(&x);
        let (coeffs, residual) = target.decompose(&[g1.clone(), g2.clone()]).unwrap();
        assert!(residual.is_trivially_zero());
        assert_eq!(coeffs, vec![Scalar::from_int(3), -x.clone()]);
        let (_, residual) = e[1].decompose(&[g2]).unwrap();
        assert!(!residual.is_zero().unwrap());
    }

    #[test]
    fn map_basis_is_multiplicative() {
        let f = su2();
        let e = f.basis_forms();
        // swap al and be, scale ga
        let two = Scalar::from_int(2);
        let images = vec![e[1].clone(), e[0].clone(), e[2].scale(&two)];
        let w = e[0].wedge(&e[2]);
        let mapped = w.map_basis(&f, &images, |c| Ok(c.clone())).unwrap();
        assert_eq!(mapped.coefficient(&["be", "ga"]).unwrap(), two);
    }
}
