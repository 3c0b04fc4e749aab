use thiserror::Error;

/// Errors raised across graph construction, statistics and null models.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,

    #[error("node index {index} out of range for graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need at least {needed} present values, found {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("constant data")]
    ConstantData,

    #[error("empty weight matrix")]
    EmptyWeights,

    #[error("network variance not positive")]
    NetworkVarianceNotPositive,

    #[error("Getis–Ord requires nonnegative data")]
    NegativeData,

    #[error("Getis–Ord denominator is zero")]
    DegenerateGetisOrd,

    #[error("degenerate degree variance")]
    DegenerateDegreeVariance,

    #[error("graph not rewireable: {accepted} of {requested} swaps accepted after {proposals} proposals")]
    NotRewireable {
        accepted: usize,
        requested: usize,
        proposals: usize,
    },

    #[error("{failed} of {total} null replicates failed: {last}")]
    TooManyFailures {
        failed: usize,
        total: usize,
        last: Box<Error>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
