use thiserror::Error;

use tightbell::BellError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("non-physical state: {0}")]
    InvalidState(String),

    #[error("invalid correlation tensor: {0}")]
    InvalidTensor(String),

    #[error("invalid measurement settings: {0}")]
    InvalidSettings(String),

    #[error("invalid local frames: {0}")]
    InvalidFrames(String),

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Bell(#[from] BellError),
}

pub type Result<T> = std::result::Result<T, QuantumError>;
