use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("index {index} out of range for {size} sites")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("at most {max} sites supported, got {requested}")]
    TooLarge { requested: usize, max: usize },

    #[error("operator {0} is not Hermitian (phase is ±i)")]
    NonHermitian(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no path between vertices {0} and {1}")]
    NoPath(usize, usize),

    #[error("{0} is not an element of the stabilizer group")]
    NotAStabilizer(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("insecure plan for pair ({i},{j}): {reason}")]
    InsecurePlan { i: usize, j: usize, reason: String },

    #[error("unsupported dimension {0}: only prime local dimensions are supported because local subgroup ranks need field arithmetic")]
    UnsupportedDimension(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
