use thiserror::Error;

/// Errors raised by the arithmetic, series and probe routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{value} is out of range (limit {limit})")]
    OutOfRange { value: u64, limit: u64 },

    #[error("no prime value defined for p = {0}")]
    IncompleteDefinition(u64),

    #[error("pole at s = {sigma} + {t}i")]
    Pole { sigma: f64, t: f64 },

    #[error("point {point} lies outside the admissible window (must exceed {bound})")]
    Window { point: f64, bound: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("composition requires a series with zero constant term (got {0})")]
    ShiftRequired(f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("norm list exhausted: {0}")]
    LimitExhausted(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("evaluation failed at x = {x}: {message}")]
    Evaluation { x: f64, message: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
