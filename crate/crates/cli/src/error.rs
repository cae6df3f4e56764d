use thiserror::Error;

use tightbell::BellError;
use tightbell_quantum::QuantumError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    /// `origin` names the file and, when known, the line or field.
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error(transparent)]
    Bell(#[from] BellError),

    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

impl CliError {
    /// Errors end the run before any check is made.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
