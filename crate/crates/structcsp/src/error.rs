use thiserror::Error;

/// Errors reported by parsing, validation, and the solving pipeline.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("semantic error: {0}")]
    Semantic(String),

    #[error("invalid join tree: {0}")]
    InvalidJoinTree(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("budget exceeded: projected {projected} tuples, budget {budget}")]
    BudgetExceeded { projected: u128, budget: u64 },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub fn semantic(msg: impl Into<String>) -> Self {
        Error::Semantic(msg.into())
    }
}
