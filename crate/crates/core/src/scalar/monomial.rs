use std::cmp::Ordering;
use std::fmt;

use super::Symbol;

/// Power product of symbols, stored as `(symbol, exponent)` pairs sorted by
/// symbol id with no zero exponents.
///
/// `Ord` is graded lexicographic: total degree first, then the exponent of the
/// lowest-id symbol where the two differ.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Symbol, u32)>) -> Self {
        let mut v: Vec<(Symbol, u32)> = Vec::new();
        for (s, e) in pairs {
            if e == 0 {
                continue;
            }
            match v.iter_mut().find(|(t, _)| *t == s) {
                Some(slot) => slot.1 += e,
                None => v.push((s, e)),
            }
        }
        v.sort_by_key(|(s, _)| *s);
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Symbol) -> u32 {
        self.0
            .binary_search_by_key(&s, |(t, _)| *t)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().map(|(s, _)| *s)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(s, e)| other.exponent(s) >= e)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let v = self
            .0
            .iter()
            .filter_map(|&(s, e)| {
                let r = e - other.exponent(s);
                (r > 0).then_some((s, r))
            })
            .collect();
        Some(Monomial(v))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let v = self
            .0
            .iter()
            .filter_map(|&(s, e)| {
                let m = e.min(other.exponent(s));
                (m > 0).then_some((s, m))
            })
            .collect();
        Monomial(v)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let g = self.gcd(other);
        self.mul(other).div(&g).expect("gcd divides the product")
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(s, e)| (s, e * k)).collect())
    }

    /// Derivative with respect to `s`: the multiplicity and the lowered monomial.
    pub fn derivative(&self, s: Symbol) -> Option<(u32, Monomial)> {
        let e = self.exponent(s);
        if e == 0 {
            return None;
        }
        let v = self
            .0
            .iter()
            .filter_map(|&(t, f)| {
                if t == s {
                    (f > 1).then_some((t, f - 1))
                } else {
                    Some((t, f))
                }
            })
            .collect();
        Some((e, Monomial(v)))
    }

    /// Writes the monomial with every exponent multiplied by `sign` (used to
    /// print denominators as negative powers). Returns false for `1`.
    pub(crate) fn write_factors(&self, out: &mut String, sign: i64) -> bool {
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                out.push('*');
            }
            out.push_str(&s.name());
            let e = *e as i64 * sign;
            if e != 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
        !self.0.is_empty()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let ((s, e), (t, f)) = (a[i], b[j]);
            match s.cmp(&t) {
                Ordering::Equal => {
                    if e != f {
                        return e.cmp(&f);
                    }
                    i += 1;
                    j += 1;
                }
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        (a.len() - i).cmp(&(b.len() - j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if !self.write_factors(&mut s, 1) {
            s.push('1');
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms() -> (Symbol, Symbol, Symbol) {
        (
            Symbol::new("mono_test_x"),
            Symbol::new("mono_test_y"),
            Symbol::new("mono_test_z"),
        )
    }

    #[test]
    fn graded_lex_order() {
        let (x, y, z) = syms();
        let x2 = Monomial::from_pairs([(x, 2)]);
        let yz = Monomial::from_pairs([(y, 1), (z, 1)]);
        let xyz = Monomial::from_pairs([(x, 1), (y, 1), (z, 1)]);
        assert!(x2 > yz);
        assert!(xyz > x2);
        assert!(Monomial::var(z) > Monomial::one());
        assert!(Monomial::var(x) > Monomial::var(y));
    }

    #[test]
    fn division_and_gcd() {
        let (x, y, _) = syms();
        let a = Monomial::from_pairs([(x, 3), (y, 1)]);
        let b = Monomial::from_pairs([(x, 1), (y, 2)]);
        assert_eq!(a.gcd(&b), Monomial::from_pairs([(x, 1), (y, 1)]));
        assert_eq!(a.lcm(&b), Monomial::from_pairs([(x, 3), (y, 2)]));
        assert_eq!(a.div(&b), None);
        assert_eq!(a.div(&Monomial::var(x)), Some(Monomial::from_pairs([(x, 2), (y, 1)])));
    }
}
