//! Pseudo-flag structures: normalization of the lifted coframe, curvature
//! coefficients, the embedding into the full connection, and everything
//! computed from it.
//!
//! Input is a four-dimensional frame `{θ, Z¹, Z², λ}` with `dθ = Z¹∧Z²`, a
//! fiber coordinate `a` with `da = a·λ`, and `dλ = 0`. The lifted coframe is
//! `θ¹ = a·Z¹`, `θ² = a⁻¹·Z²`. The section of the connection bundle is
//! always the one with `φ = 0`.

mod bianchi;
mod curvature;
mod integrand;
mod invariants;
mod pseudo;
mod reality;
mod report;

pub use bianchi::{bianchi_checks, BianchiReport};
pub use curvature::{curvature_coefficients, embed_to_connection, CurvatureCoefficients, EmbeddingData};
pub use integrand::{invariant_integrand, Integrand, INTEGRAND_FACTOR};
pub use invariants::{
    curvature_invariants, verify_structure_equations, CurvatureInvariants, EquationResidual,
    ResidualReport,
};
pub use pseudo::{
    candidate, normalize, reduce_pseudo_flag, Candidate, PseudoFlagStructure, ReductionOutput, ZCoefficients,
};
pub use reality::{check_cr_reality, ConjugationSpec, RealityConditions, RealityReport};
pub use report::CurvatureReport;
