use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zeros is undefined")]
    GcdOfZeros,
    #[error("empty rectangle family")]
    EmptyFamily,
    #[error("rectangle dimensions must be positive, got {0} x {1}")]
    NonPositiveDimension(String, String),
    #[error("degenerate basis: vectors are linearly dependent")]
    DegenerateBasis,
    #[error("basis is not canonical: {0}")]
    NonCanonical(String),
    #[error("family is not integral")]
    NonIntegerFamily,
    #[error("invalid periodic set: {0}")]
    InvalidPeriodicSet(String),
    #[error("search too large: {0}")]
    SearchTooLarge(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
