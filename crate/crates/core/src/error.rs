use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis mismatch: [{left}] vs [{right}]")]
    BasisMismatch { left: String, right: String },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("zero vector not normalizable")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected} amplitudes, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("context incompatible with state (probability {probability:e})")]
    IncompatibleContext { probability: f64 },

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("unknown label `{label}`; available: {}", available.join(", "))]
    UnknownLabel { label: String, available: Vec<String> },

    #[error("ambiguous context `{query}` matches: {}", matches.join(", "))]
    AmbiguousContext { query: String, matches: Vec<String> },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("context column `{0}` has no mass")]
    EmptyContext(String),

    #[error("concepts incompatible under relation: {0}")]
    IncompatibleConcepts(String),

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: String,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("out-of-vocabulary tokens: {}", .0.join(", "))]
    OutOfVocabulary(Vec<String>),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn out_of_range(name: impl Into<String>, value: f64, min: f64, max: f64) -> Self {
        Error::OutOfRange {
            name: name.into(),
            value,
            min,
            max,
        }
    }
}
