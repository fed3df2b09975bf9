use thiserror::Error;

/// Errors raised by parameter validation, special functions and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("alpha = {0} is outside (0, 2]; symmetric stable projections only exist for alpha in (0, 2]")]
    AlphaOutOfRange(f64),

    #[error("parameter `{name}` must be strictly positive and finite, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("invalid sigma matrix: {0}")]
    InvalidSigma(String),

    #[error("invalid kernel specification: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
