use thiserror::Error;

/// Errors raised by the exact layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BellError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("numerator {value} at flat index {index} exceeds 2^{denom_exp}")]
    NumeratorOutOfRange {
        index: usize,
        value: i64,
        denom_exp: u32,
    },

    #[error("denominator exponent {found} does not match the scenario (expected {expected})")]
    DenominatorMismatch { expected: u32, found: u32 },

    #[error("sign table is not admissible: value {value} at assignment {assignment:#b}")]
    NotAdmissible { assignment: u32, value: String },

    #[error("table is not a one-variable-per-party multilinear form")]
    NotMultilinear,

    #[error("invalid variable selection: {0}")]
    InvalidVariables(String),

    #[error("invalid symmetry: {0}")]
    InvalidSymmetry(String),

    #[error("invalid setting identification: {0}")]
    InvalidIdentification(String),

    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, BellError>;
