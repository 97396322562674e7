//! Exact arithmetic kernel.
//!
//! Coefficients live in the Gaussian rationals `Q(i)`; scalars are rational
//! functions over `Q(i)` in globally interned symbols. Zero testing goes
//! through [`RelationSet`] reduction of the numerator, so two scalars are
//! equal exactly when their cross-multiplied difference reduces to zero.

mod gaussian;
mod monomial;
mod polynomial;
mod rational;
mod relations;
mod symbol;

pub use gaussian::GaussianRational;
pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use rational::Scalar;
pub use relations::{RelationSet, Rule, REDUCTION_BUDGET};
pub use symbol::Symbol;
