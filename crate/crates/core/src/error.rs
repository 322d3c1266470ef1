use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("zero pivot at row {row} of line system")]
    SingularLine { row: usize },
    #[error("non-physical state on level {level}, iteration {iteration}: {detail}")]
    NonPhysical {
        level: usize,
        iteration: usize,
        detail: String,
    },
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
