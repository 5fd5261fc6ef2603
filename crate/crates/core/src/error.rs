use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mixed-field arithmetic: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("inhomogeneous expression: terms of degree {first} and {second}")]
    Inhomogeneous { first: u32, second: u32 },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("point is not singular: partial derivative {index} is nonzero")]
    NotSingular { index: usize },

    #[error("point {index} lies on the projection center")]
    PointOnCenter { index: usize },

    #[error("no admissible projection after {attempts} attempts")]
    ExhaustedAttempts { attempts: usize },

    #[error("search budget exceeded in {what}{}", partial.map(|p| format!(" (partial lower bound {p})")).unwrap_or_default())]
    BudgetExceeded { what: String, partial: Option<usize> },

    #[error("partition extraction did not terminate within {0} iterations")]
    ExtractionLoop(usize),

    #[error("no witness: {0}")]
    NoWitness(String),

    #[error("certificate verification failed: {0}")]
    Verification(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
