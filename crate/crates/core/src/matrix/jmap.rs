use std::fmt;

use super::gauge::BorelElement;
use crate::error::{Error, Result};
use crate::scalar::{RelationSet, Scalar};

/// 4×4 matrix of scalars, the target of [`j_homomorphism`].
#[derive(Clone, PartialEq)]
pub struct HMatrix {
    pub entries: [[Scalar; 4]; 4],
}

impl HMatrix {
    pub fn identity() -> HMatrix {
        HMatrix {
            entries: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { Scalar::one() } else { Scalar::zero() })
            }),
        }
    }

    pub fn mul(&self, other: &HMatrix) -> HMatrix {
        HMatrix {
            entries: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..4).fold(Scalar::zero(), |acc, k| {
                        &acc + &(&self.entries[i][k] * &other.entries[k][j])
                    })
                })
            }),
        }
    }

    /// Entrywise equality modulo `rel`.
    pub fn equals(&self, other: &HMatrix, rel: &RelationSet) -> Result<bool> {
        for i in 0..4 {
            for j in 0..4 {
                if !self.entries[i][j].equals(&other.entries[i][j], rel)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for HMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The homomorphism from the Borel group into the structure group of the
/// coframe bundle. With `(a, b, c, d, e) = (α, β, γ, δ, ε)`:
///
/// ```text
/// | a/b  −2a²d   c/b       4e/b − 2acd |
/// | 0     a²b    0         abc         |
/// | 0     0      1/(ab²)   2d/b        |
/// | 0     0      0         1           |
/// ```
///
/// Its kernel is the cyclic group of scalar matrices `ζ·I` with `ζ³ = 1`.
pub fn j_homomorphism(h: &BorelElement, rel: &RelationSet) -> Result<HMatrix> {
    h.check_invertible(rel)?;
    let (a, b, c, d, e) = (&h.alpha, &h.beta, &h.gamma, &h.delta, &h.epsilon);
    let nonzero = |r: Result<Scalar>| r.map_err(|_| Error::NonInvertible("alpha*beta vanishes".into()));
    let ib = nonzero(b.inv())?;
    let n = Scalar::from_int;
    let z = Scalar::zero;
    let a2 = a * a;
    Ok(HMatrix {
        entries: [
            [
                a * &ib,
                -(&n(2) * &(&a2 * d)),
                c * &ib,
                &(&(&n(4) * e) * &ib) - &(&n(2) * &(&(a * c) * d)),
            ],
            [z(), &a2 * b, z(), &(a * b) * c],
            [z(), z(), nonzero((a * &(b * b)).inv())?, &(&n(2) * d) * &ib],
            [z(), z(), z(), Scalar::one()],
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_identity() {
        let rel = RelationSet::new();
        let j = j_homomorphism(&BorelElement::identity(), &rel).unwrap();
        assert!(j.equals(&HMatrix::identity(), &rel).unwrap());
    }

    #[test]
    fn homomorphism_property() {
        let rel = RelationSet::new();
        let v = Scalar::var;
        let h1 = BorelElement::symbolic();
        let h2 = BorelElement::new(v("j_a2"), v("j_b2"), v("j_c2"), v("j_d2"), v("j_e2"));
        let lhs = j_homomorphism(&h1.compose(&h2).unwrap(), &rel).unwrap();
        let rhs = j_homomorphism(&h1, &rel).unwrap().mul(&j_homomorphism(&h2, &rel).unwrap());
        assert!(lhs.equals(&rhs, &rel).unwrap());
    }

    #[test]
    fn cube_roots_of_unity_are_in_the_kernel() {
        let zeta = Scalar::var("j_zeta");
        let mut rel = RelationSet::new();
        rel.add_scalar(&(&(&zeta * &zeta) + &(&zeta + &Scalar::one()))).unwrap();
        let h = BorelElement::diagonal(zeta.clone(), zeta.clone());
        // the middle entry 1/ζ² equals ζ modulo the relation
        assert!(zeta.equals(&(&zeta * &zeta).inv().unwrap(), &rel).unwrap());
        let j = j_homomorphism(&h, &rel).unwrap();
        assert!(j.equals(&HMatrix::identity(), &rel).unwrap());
    }
}
