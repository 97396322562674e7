use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("relation reduction exceeded the budget of {budget} rule applications")]
    NonTerminatingReduction { budget: usize },
    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("forms live on different frames")]
    FrameMismatch,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("unknown basis form `{0}`")]
    UnknownBasis(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("frame is not consistent (d^2 != 0): {0}")]
    InconsistentFrame(String),

    #[error("shape violation in {equation}: {detail}")]
    ShapeViolation { equation: String, detail: String },
    #[error("not invertible: {0}")]
    NonInvertible(String),
    #[error("not a pseudo-flag structure: {0}")]
    NotAPseudoFlag(String),
    #[error("degenerate contact data: d(theta)^theta vanishes")]
    DegenerateContact,
    #[error("cross-check mismatch for {quantity}: {detail}")]
    CrossCheckMismatch { quantity: String, detail: String },
    #[error("ill-formed involution: {0}")]
    IllFormedInvolution(String),
    #[error("structure constants violate the Jacobi identity: {0}")]
    JacobiViolation(String),
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn shape(equation: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::ShapeViolation {
            equation: equation.into(),
            detail: detail.into(),
        }
    }
}
