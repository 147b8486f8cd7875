use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator {index} is not invertible over the integers (determinant {determinant})")]
    NotInvertible { index: usize, determinant: String },

    #[error("group closure exceeded the order cap of {cap}; the generators likely span an infinite group")]
    OrderCapExceeded { cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lattices are defined over different groups")]
    GroupMismatch,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error at {field}: {message}")]
    Validation { field: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
