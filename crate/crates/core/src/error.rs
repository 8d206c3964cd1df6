use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("truncation order {requested} exceeds the configured maximum {max}")]
    Capacity { requested: usize, max: usize },

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("unknown color `{0}`")]
    UnknownColor(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("term of grade {grade} exceeds truncation order {order}")]
    GradeAboveOrder { grade: usize, order: usize },

    #[error("{0} is not primitive")]
    NotPrimitive(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("functional is not multiplicative for the shuffle product")]
    NotMultiplicative,

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    /// Two independent evaluation routes disagreed. Always an engine bug.
    #[error("internal error: {0}")]
    RouteMismatch(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
