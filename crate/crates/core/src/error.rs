use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input, bad configuration, malformed files.
    Usage,
    /// The request is well-formed but outside the regime a decoder supports
    /// (radius violated, deletions seen by an insertion-only decoder).
    Regime,
    /// An algebraic invariant that should always hold did not.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is a prime power but not prime; only prime base fields are supported")]
    UnsupportedBaseField(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(usize),
    #[error("field element does not belong to this field context")]
    ContextMismatch,
    #[error("vectors are linearly dependent over the base field")]
    DependentBasis,
    #[error("no normal element found after {0} trials")]
    NormalSearchExhausted(usize),
    #[error("the zero polynomial has no proper root space")]
    ZeroPolynomial,
    #[error("nonzero coefficient at index {index} below the shift amount {shift}")]
    NonzeroBelowShift { index: usize, shift: usize },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("base field mismatch: q = {left} vs q = {right}")]
    BaseFieldMismatch { left: u32, right: u32 },
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("digit {digit} is out of range for q = {q}")]
    DigitOutOfRange { digit: u64, q: u32 },
    #[error("infeasible channel: {0}")]
    InfeasibleChannel(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("message has {got} symbols, expected {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("received space has dimension {got}, but the claimed insertions/deletions imply {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("outside the decoding radius: {0}")]
    RadiusViolated(String),
    #[error("deletion detected at evaluation point {0}; this decoder handles insertions only")]
    DeletionDetected(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::RadiusViolated(_) | Error::DeletionDetected(_) => ErrorClass::Regime,
            Error::NormalSearchExhausted(_) | Error::Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Usage,
        }
    }
}
