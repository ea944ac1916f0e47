use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range for {limit} states")]
    Range { index: usize, limit: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("transformation is not invertible")]
    NotInvertible,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("register budget exceeded: {needed} registers requested, budget is {budget}")]
    RegisterBudget { needed: u128, budget: usize },

    #[error("exhaustive verification of {states} states exceeds budget {budget}")]
    VerificationBudget { states: u128, budget: u128 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
