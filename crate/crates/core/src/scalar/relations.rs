use std::fmt;

use super::{GaussianRational, Monomial, Polynomial, Scalar};
use crate::error::{Error, Result};

/// Maximum number of rule applications in a single reduction.
pub const REDUCTION_BUDGET: usize = 1_000_000;

/// Rewrite rule `lead -> replacement`. Every term of `replacement` is
/// strictly smaller than `lead` in the graded-lex order, which makes
/// rewriting terminate.
#[derive(Clone, PartialEq, Eq)]
pub struct Rule {
    lead: Monomial,
    replacement: Polynomial,
}

impl Rule {
    pub fn new(lead: Monomial, replacement: Polynomial) -> Result<Rule> {
        if lead.is_one() {
            return Err(Error::InvalidRelation(
                "a relation cannot rewrite the constant monomial".into(),
            ));
        }
        if let Some((m, _)) = replacement.leading_term() {
            if *m >= lead {
                return Err(Error::InvalidRelation(format!(
                    "replacement term {m} is not smaller than {lead}"
                )));
            }
        }
        Ok(Rule { lead, replacement })
    }

    /// Orients the relation `p = 0` towards its leading monomial.
    pub fn from_polynomial(p: &Polynomial) -> Result<Rule> {
        let (lead, lc) = p
            .leading_term()
            .ok_or_else(|| Error::InvalidRelation("the zero polynomial is not a relation".into()))?;
        if lead.is_one() {
            return Err(Error::InvalidRelation(format!(
                "constant relation {p} = 0 is inconsistent"
            )));
        }
        let lead = lead.clone();
        let inv = lc.inv()?;
        let mut rest = p.scale(&inv);
        rest.remove_term(&lead);
        Rule::new(lead, -&rest)
    }

    pub fn lead(&self) -> &Monomial {
        &self.lead
    }

    /// The rule's leading monomial as a polynomial.
    pub fn lead_polynomial(&self) -> Polynomial {
        Polynomial::term(GaussianRational::one(), self.lead.clone())
    }

    pub fn replacement(&self) -> &Polynomial {
        &self.replacement
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lead, self.replacement)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Polynomial side relations among the symbols, used for zero testing.
///
/// Rules are not completed to a Gröbner basis; reduction is the plain
/// leading-term rewrite. That is enough for the relations that arise here
/// (one quadric per family) but a zero answer from a non-confluent set
/// should be read as "zero modulo these rewrite rules".
#[derive(Clone, Default, PartialEq, Eq)]
pub struct RelationSet {
    rules: Vec<Rule>,
    budget: usize,
}

impl RelationSet {
    pub fn new() -> Self {
        RelationSet {
            rules: Vec::new(),
            budget: REDUCTION_BUDGET,
        }
    }

    /// Lowers the rule-application budget; mostly useful in tests.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn add_rule(&mut self, rule: Rule) {
        if !self.rules.contains(&rule) {
            self.rules.push(rule);
        }
    }

    /// Adds the relation `p = 0`.
    pub fn add_polynomial(&mut self, p: &Polynomial) -> Result<()> {
        self.add_rule(Rule::from_polynomial(p)?);
        Ok(())
    }

    /// Adds the relation `s = 0` for a scalar; only the numerator matters.
    pub fn add_scalar(&mut self, s: &Scalar) -> Result<()> {
        self.add_polynomial(s.numerator())
    }

    pub fn merged(&self, other: &RelationSet) -> RelationSet {
        let mut out = self.clone();
        for r in &other.rules {
            out.add_rule(r.clone());
        }
        out
    }

    /// Normal form of `p` under the rules.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        if self.rules.is_empty() {
            return Ok(p.clone());
        }
        let budget = if self.budget == 0 { REDUCTION_BUDGET } else { self.budget };
        let mut work = p.clone();
        let mut out = Polynomial::zero();
        let mut steps = 0usize;
        while let Some((m, c)) = work.leading_term() {
            let (m, c): (Monomial, GaussianRational) = (m.clone(), c.clone());
            work.remove_term(&m);
            match self.rules.iter().find(|r| r.lead.divides(&m)) {
                Some(rule) => {
                    steps += 1;
                    if steps > budget {
                        return Err(Error::NonTerminatingReduction { budget });
                    }
                    let q = m.div(&rule.lead).expect("lead divides");
                    work = &work + &rule.replacement.mul_term(&c, &q);
                }
                None => out.add_term(m, c),
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rules).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &Scalar) -> Polynomial {
        s.numerator().clone()
    }

    #[test]
    fn quadric_relation() {
        let (x, y, z) = (Scalar::var("rel_x"), Scalar::var("rel_y"), Scalar::var("rel_z"));
        let rel_poly = &(&(&x * &x) + &(&y * &z)) + &Scalar::one();
        let mut rel = RelationSet::new();
        rel.add_scalar(&rel_poly).unwrap();
        assert!(rel_poly.is_zero(&rel).unwrap());
        assert!((&rel_poly * &(&x + &y)).is_zero(&rel).unwrap());
        assert!(!(&x * &x).is_zero(&rel).unwrap());
    }

    #[test]
    fn cube_root_of_unity() {
        let z = Scalar::var("rel_zeta");
        let mut rel = RelationSet::new();
        rel.add_scalar(&(&(&z * &z) + &(&z + &Scalar::one()))).unwrap();
        assert!((&z.pow(3).unwrap() - &Scalar::one()).is_zero(&rel).unwrap());
        assert_eq!(rel.reduce(&p(&z.pow(2).unwrap())).unwrap(), p(&(-&z - &Scalar::one())));
    }

    #[test]
    fn constant_relations_are_rejected() {
        let mut rel = RelationSet::new();
        assert!(matches!(
            rel.add_polynomial(&Polynomial::one()),
            Err(Error::InvalidRelation(_))
        ));
        assert!(matches!(
            rel.add_polynomial(&Polynomial::zero()),
            Err(Error::InvalidRelation(_))
        ));
    }

    #[test]
    fn non_decreasing_rule_is_rejected() {
        let x = Scalar::var("rel_u");
        let lead = p(&x).leading_term().unwrap().0.clone();
        assert!(Rule::new(lead, p(&(&x * &x))).is_err());
    }

    #[test]
    fn budget_exhaustion() {
        let x = Scalar::var("rel_b");
        let mut rel = RelationSet::new().with_budget(5);
        rel.add_scalar(&(&(&x * &x) - &x)).unwrap();
        assert_eq!(
            rel.reduce(&p(&x.pow(20).unwrap())),
            Err(Error::NonTerminatingReduction { budget: 5 })
        );
    }
}
