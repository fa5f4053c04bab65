use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("insufficient samples: need at least {needed}, got {got} ({detail})")]
    InsufficientSamples {
        needed: usize,
        got: usize,
        detail: String,
    },

    #[error("unsupported dimension {dim} (supported: at most {max})")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("degenerate arrangement: {0}")]
    Degenerate(String),

    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
