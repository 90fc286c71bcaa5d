use thiserror::Error;

/// Errors produced by spectrum construction and the conversion procedures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("index {index} is below the first index {first} of this spectrum")]
    IndexOutOfRange { index: usize, first: usize },

    #[error("invalid coefficient list: {0}")]
    InvalidCoefficients(String),

    #[error("amplitude matrix is empty")]
    EmptyMatrix,

    #[error("amplitude matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not doubly stochastic: {0}")]
    NotDoublyStochastic(String),

    #[error("source is not majorized by target (prefix {index} exceeds by {margin:e})")]
    NotMajorized { index: usize, margin: f64 },

    #[error("conversion is not certified: {0}")]
    NotConvertible(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("search budget of {budget} exceeded while looking for {what}")]
    BudgetExceeded { what: &'static str, budget: usize },

    #[error("rate family rejected: {0}")]
    InvalidFamily(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("malformed input at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            constraint,
        }
    }
}
