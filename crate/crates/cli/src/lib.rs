//! `flagcalc`: reads a `.flag` document, runs the flag-structure pipeline
//! and reports every quantity as an exact string.

pub mod document;
pub mod error;
pub mod report;
pub mod run;
pub mod syntax;

use thiserror::Error;

pub use document::{parse, InputDocument};
pub use error::{InputError, Pos};
pub use report::ReportDocument;
pub use run::{run, Command};

/// Exit code for a verification failure.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for malformed or unusable input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Core(#[from] flagcalc_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{equation} fails: {detail}")]
    Verification { equation: String, detail: String },
}

impl CliError {
    pub(crate) fn verification(equation: impl Into<String>, detail: impl Into<String>) -> Self {
        CliError::Verification {
            equation: equation.into(),
            detail: detail.into(),
        }
    }

    /// 1 for a failed check, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        use flagcalc_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Io { .. } => EXIT_INPUT,
            CliError::Verification { .. } => EXIT_FAILURE,
            CliError::Core(e) => {
                let mut e = e;
                while let E::Stage { source, .. } = e {
                    e = source;
                }
                match e {
                    E::ShapeViolation { .. }
                    | E::CrossCheckMismatch { .. }
                    | E::InconsistentFrame(_)
                    | E::JacobiViolation(_)
                    | E::NotAPseudoFlag(_)
                    | E::DegenerateContact
                    | E::IllFormedInvolution(_) => EXIT_FAILURE,
                    E::DivisionByZero
                    | E::UnknownSymbol(_)
                    | E::NonTerminatingReduction { .. }
                    | E::InvalidRelation(_)
                    | E::FrameMismatch
                    | E::DegreeMismatch { .. }
                    | E::UnknownBasis(_)
                    | E::InvalidFrame(_)
                    | E::NonInvertible(_)
                    | E::NotSupported(_)
                    | E::Stage { .. } => EXIT_INPUT,
                }
            }
        }
    }

    /// Short machine-readable error name.
    pub fn kind(&self) -> &'static str {
        use flagcalc_core::Error as E;
        match self {
            CliError::Input(InputError::Parse { .. }) => "ParseError",
            CliError::Input(InputError::UndeclaredName { .. }) => "UndeclaredName",
            CliError::Input(InputError::DuplicateDeclaration { .. }) => "DuplicateDeclaration",
            CliError::Input(InputError::Invalid { .. }) => "InvalidInput",
            CliError::Input(InputError::Missing(_)) => "MissingInput",
            CliError::Io { .. } => "Io",
            CliError::Verification { .. } => "VerificationFailure",
            CliError::Core(e) => {
                let mut e = e;
                while let E::Stage { source, .. } = e {
                    e = source;
                }
                match e {
                    E::DivisionByZero => "DivisionByZero",
                    E::UnknownSymbol(_) => "UnknownSymbol",
                    E::NonTerminatingReduction { .. } => "NonTerminatingReduction",
                    E::InvalidRelation(_) => "InvalidRelation",
                    E::FrameMismatch => "FrameMismatch",
                    E::DegreeMismatch { .. } => "DegreeMismatch",
                    E::UnknownBasis(_) => "UnknownBasis",
                    E::InvalidFrame(_) => "InvalidFrame",
                    E::InconsistentFrame(_) => "InconsistentFrame",
                    E::ShapeViolation { .. } => "ShapeViolation",
                    E::NonInvertible(_) => "NonInvertible",
                    E::NotAPseudoFlag(_) => "NotAPseudoFlag",
                    E::DegenerateContact => "DegenerateContact",
                    E::CrossCheckMismatch { .. } => "CrossCheckMismatch",
                    E::IllFormedInvolution(_) => "IllFormedInvolution",
                    E::JacobiViolation(_) => "JacobiViolation",
                    E::NotSupported(_) => "NotSupported",
                    E::Stage { .. } => "Stage",
                }
            }
        }
    }
}
