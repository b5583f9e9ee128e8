use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch in `{field}`: expected {expected}, found {found}")]
    DimensionMismatch {
        field: String,
        expected: usize,
        found: usize,
    },

    #[error("direction is not a unit vector (|u| = {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("projection solver did not converge after {iterations} iterations (duality gap {gap:e})")]
    Convergence { iterations: usize, gap: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("ill-conditioned Steiner fit (condition number {cond:e}); use a wider or Chebyshev t-grid")]
    IllConditioned { cond: f64 },

    #[error("malformed `{field}`: {message}")]
    Format { field: String, message: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("lambda {lambda} is inconsistent with body radius {radius} (expected lambda = 1/radius)")]
    LambdaMismatch { lambda: f64, radius: f64 },

    #[error("no nonnegative certificate for triple ({i}, {j}, {k})")]
    NoCertificate { i: usize, j: usize, k: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
