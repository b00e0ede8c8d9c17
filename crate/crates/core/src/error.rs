use thiserror::Error;

/// Errors produced by the knapsack, lattice and attack routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("basis is rank deficient (row {row} has a zero Gram-Schmidt vector)")]
    RankDeficient { row: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("corrupt ciphertext: block {block} does not decode")]
    CorruptCiphertext { block: usize },

    #[error("key incompatible with ciphertext: {0}")]
    KeyIncompatible(String),

    #[error("malformed field `{field}`: {reason}")]
    Malformed { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
