use thiserror::Error;

use crate::model::TagId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("{what} size {size} exceeds cap {cap}")]
    Size {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unknown tag `{0}`")]
    UnknownTag(TagId),

    #[error("removing the cut edges does not disconnect the interaction graph")]
    NotSeparable,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cartesian product of {size} samples exceeds cap {cap}; subsample first")]
    ProductCap { size: u128, cap: u128 },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("objective returned a non-finite value at evaluation {evaluation}")]
    NonFinite { evaluation: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
