use thiserror::Error;

/// Errors raised by the numerical kernels and the exact coefficient machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("log-gamma pole at non-positive integer {0}")]
    Pole(f64),

    #[error("series did not converge within {terms} terms: {context}")]
    Convergence { terms: usize, context: String },

    #[error("oracle failure: {0}")]
    OracleFailure(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("insufficient sampling: tail estimate {tail:e} exceeds tolerance {tolerance:e}")]
    Accuracy { tail: f64, tolerance: f64 },

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("Faa di Bruno phase is not real for k={k}, partition {partition:?}")]
    PhaseNotReal { k: u32, partition: Vec<u32> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
