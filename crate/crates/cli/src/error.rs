use std::fmt;

use thiserror::Error;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{pos}: parse error: expected {}, found {found}", expected.join(" or "))]
    Parse {
        pos: Pos,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: undeclared name `{name}`")]
    UndeclaredName { pos: Pos, name: String },
    #[error("{pos}: `{name}` is declared twice")]
    DuplicateDeclaration { pos: Pos, name: String },
    #[error("{pos}: {message}")]
    Invalid { pos: Pos, message: String },
    #[error("{0}")]
    Missing(String),
}

impl InputError {
    pub(crate) fn parse(pos: Pos, expected: &[&str], found: impl Into<String>) -> Self {
        InputError::Parse {
            pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: found.into(),
        }
    }

    pub(crate) fn invalid(pos: Pos, message: impl Into<String>) -> Self {
        InputError::Invalid {
            pos,
            message: message.into(),
        }
    }
}
