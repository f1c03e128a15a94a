use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("operation `{symbol}` has arity {expected}, applied to {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("variable index {index} is unbound (assignment has {available} values)")]
    UnboundVariable { index: usize, available: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("relations have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },

    #[error("resource limit reached: more than {cap} elements")]
    ResourceLimit { cap: usize },

    #[error("no term system found: {0}")]
    NotFound(String),

    #[error("system verification failed: {0}")]
    VerificationFailed(String),

    #[error("step {step} failed: expected {expected} ({detail})")]
    StepValidationFailed {
        step: usize,
        expected: String,
        detail: String,
    },

    #[error("no candidate reading validated: {}", .0.join("; "))]
    AmbiguousFormula(Vec<String>),

    #[error("no suitable element X: {0}")]
    NoSuchX(String),

    #[error("premise not satisfied: {0}")]
    Premise(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

impl Error {
    pub(crate) fn parse(message: impl Into<String>, column: usize) -> Self {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
