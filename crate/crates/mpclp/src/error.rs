use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file. Carries the 1-based line number where parsing failed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally valid input that violates a model invariant (p out of [0,1], d <= 0, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Bad solver or CLI configuration (R <= r, empty cut set, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// An enumeration was refused because it would exceed its state budget.
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The LP backend gave up (iteration limit or numerical failure).
    #[error("lp backend failure: {0}")]
    Lp(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
