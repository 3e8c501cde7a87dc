use thiserror::Error;

/// Errors raised by the exact-algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} unbound")]
    Unbound(String),

    #[error("cannot parse scalar {text:?}: {reason}")]
    ScalarParse { text: String, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("basis change is singular")]
    SingularBasisChange,

    #[error("malformed algebra file: {0}")]
    Format(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("restriction violated: {0}")]
    RestrictionViolated(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Lie member, out of scope")]
    LieMember,
}

pub type Result<T> = std::result::Result<T, Error>;
