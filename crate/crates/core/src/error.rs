//! Error type shared across the crate.
//!
//! Every error carries a stable category string (`invalid-argument`,
//! `parse-error`, `convergence-error`, `capacity-error`, `io-error`) that the
//! CLI uses for its machine-parsable diagnostic lines and exit codes.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid-argument: {0}")]
    InvalidArgument(String),

    /// A file could not be interpreted (malformed syntax or an invariant
    /// violation); the message carries line/field diagnostics.
    #[error("parse-error: {0}")]
    Parse(String),

    /// An iterative computation did not converge within its iteration
    /// budget; carries the last estimate and residual.
    #[error("convergence-error: no convergence after {iterations} iterations (estimate {estimate}, residual {residual:e})")]
    Convergence {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },

    /// An exhaustive search or enumeration would exceed its documented cap.
    #[error("capacity-error: {0}")]
    Capacity(String),

    #[error("io-error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable category slug, the part before the first `:` in `Display`.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Parse(_) => "parse-error",
            Error::Convergence { .. } => "convergence-error",
            Error::Capacity(_) => "capacity-error",
            Error::Io(_) => "io-error",
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
