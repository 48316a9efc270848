use thiserror::Error;

/// Errors raised by the algebra and certification routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AcmError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VarCountMismatch { expected: usize, found: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("degenerate weights: subset {subset:?} sums to zero")]
    DegenerateWeights { subset: Vec<usize> },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {p} too small for partition of {n}")]
    PrimeTooSmall { p: u64, n: usize },
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("inconsistent results: {0}")]
    Inconsistency(String),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, AcmError>;
