use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{GaussianRational, Monomial, Polynomial, RelationSet, Symbol};
use crate::error::{Error, Result};

/// Rational function `num / den` over `Q(i)`.
///
/// The representation is lightly normalized: common monomial factors are
/// cancelled, the leading coefficient of `den` is one, and a non-monomial
/// denominator is divided out when it divides the numerator exactly. This is
/// a display convenience only; equality is decided by [`Scalar::is_zero`] on
/// differences.
#[derive(Clone)]
pub struct Scalar {
    num: Polynomial,
    den: Polynomial,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::constant(GaussianRational::i())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::constant(GaussianRational::from_int(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::constant(GaussianRational::from_ratio(p, q))
    }

    pub fn constant(c: GaussianRational) -> Self {
        Scalar {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn symbol(s: Symbol) -> Self {
        Scalar {
            num: Polynomial::var(s),
            den: Polynomial::one(),
        }
    }

    /// Shorthand for `Scalar::symbol(Symbol::new(name))`.
    pub fn var(name: &str) -> Self {
        Scalar::symbol(Symbol::new(name))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Scalar {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// `num / den`; fails when `den` is the zero polynomial.
    pub fn from_parts(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalized(num, den))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    fn normalized(mut num: Polynomial, mut den: Polynomial) -> Scalar {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g).expect("content divides");
            den = den.div_monomial(&g).expect("content divides");
        }
        let lc = den.leading_term().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.len() > 1 {
            if let Some(q) = num.exact_div(&den) {
                return Scalar {
                    num: q,
                    den: Polynomial::one(),
                };
            }
        }
        Scalar { num, den }
    }

    /// Structural zero test (numerator is the zero polynomial). Use
    /// [`Scalar::is_zero`] when relations are in force.
    pub fn is_trivially_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Zero test in the quotient ring: the numerator, fully reduced by
    /// `rel`, is the zero polynomial.
    pub fn is_zero(&self, rel: &RelationSet) -> Result<bool> {
        if self.num.is_zero() {
            return Ok(true);
        }
        Ok(rel.reduce(&self.num)?.is_zero())
    }

    /// `self == other` modulo `rel`, decided by zero-testing the difference.
    pub fn equals(&self, other: &Scalar, rel: &RelationSet) -> Result<bool> {
        (self - other).is_zero(rel)
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(&n * &d.inv().ok()?)
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Symbols occurring in numerator or denominator.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.num.symbols();
        v.extend(self.den.symbols());
        v.sort();
        v.dedup();
        v
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalized(self.den.clone(), self.num.clone()))
    }

    /// Exact division; fails only when `g` is structurally zero.
    pub fn try_div(&self, g: &Scalar) -> Result<Scalar> {
        Ok(self * &g.inv()?)
    }

    /// Division that also rejects divisors vanishing modulo `rel`.
    pub fn div_mod(&self, g: &Scalar, rel: &RelationSet) -> Result<Scalar> {
        if g.is_zero(rel)? {
            return Err(Error::DivisionByZero);
        }
        self.try_div(g)
    }

    pub fn pow(&self, e: i32) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Scalar::normalized(base.num.pow(k), base.den.pow(k)))
    }

    pub fn scale(&self, c: &GaussianRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Partial derivative by the quotient rule.
    pub fn partial(&self, v: Symbol) -> Scalar {
        let dn = self.num.derivative(v);
        if self.den.as_constant().is_some() {
            return Scalar::normalized(dn, self.den.clone());
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Scalar::normalized(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Scalar::normalized(num, &self.den * &self.den)
    }

    /// Partial derivative with respect to a symbol given by name; the name
    /// must already be interned.
    pub fn partial_by_name(&self, name: &str) -> Result<Scalar> {
        let v = Symbol::lookup(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(self.partial(v))
    }

    /// Simultaneous substitution of symbols.
    pub fn substitute(&self, bindings: &HashMap<Symbol, Scalar>) -> Result<Scalar> {
        self.map(|c| c.clone(), bindings)
    }

    /// Applies `coeff` to every coefficient and substitutes symbols
    /// simultaneously. Conjugation uses this with `coeff = conj`.
    pub fn map(
        &self,
        coeff: impl Fn(&GaussianRational) -> GaussianRational + Copy,
        bindings: &HashMap<Symbol, Scalar>,
    ) -> Result<Scalar> {
        let touches = self.symbols().iter().any(|s| bindings.contains_key(s));
        let num = self.num.map_coefficients(coeff);
        let den = self.den.map_coefficients(coeff);
        if !touches {
            return Scalar::from_parts(num, den);
        }
        let n = eval_poly(&num, bindings)?;
        let d = eval_poly(&den, bindings)?;
        n.try_div(&d)
    }

    /// Reduces numerator and denominator modulo `rel`.
    pub fn reduce(&self, rel: &RelationSet) -> Result<Scalar> {
        if rel.is_empty() {
            return Ok(self.clone());
        }
        let num = rel.reduce(&self.num)?;
        let den = rel.reduce(&self.den)?;
        Scalar::from_parts(num, den)
    }

    fn add_impl(&self, rhs: &Scalar) -> Scalar {
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return Scalar::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if let (Some((c1, m1)), Some((c2, m2))) = (self.den.as_term(), rhs.den.as_term()) {
            if c1.is_one() && c2.is_one() {
                let l = m1.lcm(m2);
                let f1 = l.div(m1).unwrap();
                let f2 = l.div(m2).unwrap();
                let one = GaussianRational::one();
                let num = &self.num.mul_term(&one, &f1) + &rhs.num.mul_term(&one, &f2);
                return Scalar::normalized(num, Polynomial::term(one, l));
            }
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Scalar::normalized(num, &self.den * &rhs.den)
    }

    fn mul_impl(&self, rhs: &Scalar) -> Scalar {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar {
                num: &self.num * &rhs.num,
                den: Polynomial::one(),
            };
        }
        Scalar::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

fn eval_poly(p: &Polynomial, bindings: &HashMap<Symbol, Scalar>) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut rest = Vec::new();
        let mut t = Scalar::constant(c.clone());
        for &(s, e) in m.factors() {
            match bindings.get(&s) {
                Some(v) => t = &t * &v.pow(e as i32)?,
                None => rest.push((s, e)),
            }
        }
        if !rest.is_empty() {
            t = &t * &Scalar::from_polynomial(Polynomial::term(GaussianRational::one(), Monomial::from_pairs(rest)));
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Structural equality of the normalized representation. Semantic equality
/// modulo relations is [`Scalar::equals`].
impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        (self - other).num.is_zero()
    }
}

impl Eq for Scalar {}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$imp(&rhs)
            }
        }
    };
}

impl Scalar {
    fn sub_impl(&self, rhs: &Scalar) -> Scalar {
        self.add_impl(&-rhs)
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<GaussianRational> for Scalar {
    fn from(c: GaussianRational) -> Self {
        Scalar::constant(c)
    }
}

impl From<Symbol> for Scalar {
    fn from(s: Symbol) -> Self {
        Scalar::symbol(s)
    }
}

/// Canonical printing: terms in descending graded-lex order, `p/q`
/// coefficients, `i` for the imaginary unit. Monomial denominators print as
/// negative powers (`3/2*x*z*a^-2`), anything else as `(num)/(den)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if self.den.is_one() {
            self.num.write(&mut s, None);
        } else if let Some((c, m)) = self.den.as_term().filter(|(c, _)| c.is_one()) {
            debug_assert!(c.is_one());
            self.num.write(&mut s, Some(m));
        } else {
            let mut n = String::new();
            self.num.write(&mut n, None);
            let mut d = String::new();
            self.den.write(&mut d, None);
            if self.num.len() > 1 {
                s.push_str(&format!("({n})"));
            } else {
                s.push_str(&n);
            }
            s.push_str(&format!("/({d})"));
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(name: &str) -> Scalar {
        Scalar::var(name)
    }

    #[test]
    fn gaussian_product() {
        let a = &Scalar::one() + &Scalar::i();
        let b = &Scalar::one() - &Scalar::i();
        assert_eq!(&a * &b, Scalar::from_int(2));
    }

    #[test]
    fn additive_identity() {
        let q = s("rat_x").try_div(&s("rat_y")).unwrap();
        assert_eq!(&q + &Scalar::zero(), q);
    }

    #[test]
    fn same_rational_function_is_zero_difference() {
        let (x, y, z) = (s("rat_x"), s("rat_y"), s("rat_z"));
        let a = x.try_div(&y).unwrap();
        let b = (&x * &z).try_div(&(&y * &z)).unwrap();
        assert!((&a - &b).is_zero(&RelationSet::new()).unwrap());
        assert!(!(&x + &y).is_zero(&RelationSet::new()).unwrap());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Scalar::one().try_div(&Scalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn derivatives() {
        let (x, y) = (s("rat_x"), s("rat_y"));
        let f = &(&x * &x) * &y;
        let expect = &(&Scalar::from_int(2) * &x) * &y;
        assert_eq!(f.partial(Symbol::new("rat_x")), expect);

        let a = s("rat_a");
        let inv = a.inv().unwrap();
        let d = inv.partial(Symbol::new("rat_a"));
        assert_eq!(d, -a.pow(-2).unwrap());

        let ya2 = &y * &a.pow(2).unwrap();
        assert_eq!(ya2.partial(Symbol::new("rat_a")), &(&Scalar::from_int(2) * &y) * &a);
    }

    #[test]
    fn unknown_symbol_is_an_error() {
        assert_eq!(
            Scalar::one().partial_by_name("rat_never_interned_symbol"),
            Err(Error::UnknownSymbol("rat_never_interned_symbol".into()))
        );
    }

    #[test]
    fn substitution() {
        let (x, y) = (s("rat_x"), s("rat_y"));
        let mut b = HashMap::new();
        b.insert(Symbol::new("rat_x"), Scalar::zero());
        assert!((&x * &y).substitute(&b).unwrap().is_trivially_zero());

        let (r1, r2, s1, s2) = (s("rat_r1"), s("rat_r2"), s("rat_s1"), s("rat_s2"));
        let det = &(&r1 * &s2) - &(&r2 * &s1);
        let mut b = HashMap::new();
        b.insert(Symbol::new("rat_s2"), (&Scalar::one() + &(&r2 * &s1)).try_div(&r1).unwrap());
        assert_eq!(det.substitute(&b).unwrap(), Scalar::one());

        let a = s("rat_a");
        let q1 = &(&(&Scalar::ratio(-3, 2) * &x) * &y) * &a.pow(2).unwrap();
        let mut b = HashMap::new();
        b.insert(Symbol::new("rat_x"), Scalar::zero());
        assert!(q1.substitute(&b).unwrap().is_trivially_zero());

        let mut b = HashMap::new();
        b.insert(Symbol::new("rat_y"), Scalar::zero());
        assert_eq!(x.try_div(&y).unwrap().substitute(&b), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_forms() {
        let (x, z, a) = (s("rat_px"), s("rat_pz"), s("rat_pa"));
        let q2 = (&(&Scalar::ratio(3, 2) * &x) * &z).try_div(&a.pow(2).unwrap()).unwrap();
        assert_eq!(q2.to_string(), "3/2*rat_px*rat_pz*rat_pa^-2");
        let one_over = Scalar::one().try_div(&(&x + &Scalar::one())).unwrap();
        assert_eq!(one_over.to_string(), "1/(rat_px + 1)");
        assert_eq!((&Scalar::i() * &x).to_string(), "i*rat_px");
        assert_eq!(Scalar::zero().to_string(), "0");
    }
}
