use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent or malformed physical configuration.
    #[error("configuration error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },

    /// A Fock-space truncation too small to hold the requested state.
    #[error("truncation N = {given} leaves tail mass {tail:e}; need N >= {required}")]
    Truncation { given: usize, required: usize, tail: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    /// Conditioning on a subspace that carries no weight.
    #[error("conditional expectation undefined: subspace weight is zero")]
    UndefinedConditional,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config { line: None, message: msg.into() }
    }

    pub fn config_at(line: usize, msg: impl Into<String>) -> Self {
        Error::Config { line: Some(line), message: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
