use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("numerator is not divisible by the denominator in the Laurent ring")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("no value assigned to {0}")]
    MissingAssignment(String),
    #[error("zero substituted for {0}, which carries a negative exponent")]
    ZeroSubstitution(String),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("vertex {0} is outside the region")]
    OutOfRegion(String),
    #[error("time {t} is not congruent to the color of {vertex} mod 3")]
    BadParity { vertex: String, t: i64 },
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("characteristic polynomial is not monic")]
    NotMonic,
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("not a rooted forest: {0}")]
    NotRooted(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, CubeError>;

impl From<std::io::Error> for CubeError {
    fn from(e: std::io::Error) -> Self {
        CubeError::Io(e.to_string())
    }
}
