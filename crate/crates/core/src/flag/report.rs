use super::{
    BianchiReport, CurvatureCoefficients, CurvatureInvariants, EmbeddingData, Integrand, ReductionOutput,
    ResidualReport,
};

/// Everything computed from one pseudo-flag structure.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub reduction: ReductionOutput,
    pub coefficients: CurvatureCoefficients,
    pub embedding: EmbeddingData,
    pub structure: ResidualReport,
    pub invariants: CurvatureInvariants,
    pub bianchi: BianchiReport,
    pub integrand: Integrand,
    pub flat: bool,
}
