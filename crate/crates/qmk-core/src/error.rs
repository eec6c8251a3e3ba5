//! Error types shared across the kernel.

use thiserror::Error;

/// Errors raised by algebra and vector-field operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands belong to different coordinate contexts")]
    ContextMismatch,

    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),

    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),

    #[error("substitution image for `{coordinate}` has parity {found}, expected {expected}")]
    ParityMismatch {
        coordinate: String,
        expected: String,
        found: String,
    },

    #[error("substitution has no image for coordinate `{0}`")]
    MissingImage(String),

    #[error("expected a parity-homogeneous value, got a mixed-parity one")]
    InhomogeneousParity,

    #[error("expected a weight-homogeneous value, got a mixed-weight one")]
    InhomogeneousWeight,

    #[error("expected an odd vector field")]
    NotOdd,

    #[error("expected a vector field of negative weight, got weight {0}")]
    WeightNotNegative(i64),

    #[error("expected a polynomial of weight 0")]
    WeightNotZero,

    #[error("vector field is not homological")]
    NotHomological,

    #[error("field does not have the required weight-one shape")]
    NotWeightOne,

    #[error("context contains a coordinate of negative weight `{0}`")]
    NegativeWeightCoordinate(String),

    #[error("coordinate change is not complete or not weight-preserving: {0}")]
    InvalidCoordinateChange(String),

    #[error("lifting is not a section of the quotient projection")]
    InvalidLifting,

    #[error("no bracket arguments supplied")]
    EmptyBracket,

    #[error("tables are inconsistent: {0}")]
    InconsistentTables(String),

    #[error("polynomial exceeds the configured term limit of {0} terms")]
    TermLimit(usize),
}

/// Parse errors carry a byte offset into the source; the CLI layer maps
/// offsets to line/column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, offset: usize) -> Self {
        ParseError {
            message: message.into(),
            offset,
        }
    }
}
