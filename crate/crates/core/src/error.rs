use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index out of range: requested {requested}, available {available}")]
    OutOfRange { requested: usize, available: usize },

    #[error("conditional probability undefined: context never observed")]
    UndefinedConditional,

    #[error("invalid estimator parameters: {0}")]
    InvalidParams(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("past has probability zero under the model")]
    ImpossiblePast,

    #[error("only {available} recurrences available, {requested} requested")]
    InsufficientRecurrences { requested: usize, available: usize },

    #[error("no oracle available for this model")]
    NoOracle,
}

pub type Result<T> = std::result::Result<T, Error>;
