use thiserror::Error;

pub type Result<T> = std::result::Result<T, HyperError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("derivative order {k} out of range for degree {degree}")]
    DerivativeOrder { k: usize, degree: usize },

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("expected {expected} arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("point is not in the interior of the cone: {0}")]
    NotInterior(String),

    #[error("singular linear map")]
    Singular,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl HyperError {
    pub fn precondition(msg: impl Into<String>) -> Self {
        HyperError::Precondition(msg.into())
    }

    pub fn inconclusive(msg: impl Into<String>) -> Self {
        HyperError::Inconclusive(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        HyperError::Parse(msg.into())
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(HyperError::DimensionMismatch { expected, got });
    }
    Ok(())
}
