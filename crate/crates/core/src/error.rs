use thiserror::Error;

/// How a failure should be reported to callers (the CLI maps these onto
/// exit statuses).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input could not be parsed or violates a structural invariant.
    Malformed,
    /// The input is well formed but outside the operation's domain.
    Domain,
    /// A seeded retry or shrink loop ran out of attempts.
    Exhausted,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("closedness mismatch: both curves must be open or both closed")]
    ClosednessMismatch,
    #[error("operation requires a closed curve")]
    NotClosed,
    #[error("operation requires an open curve")]
    NotOpen,
    #[error("zero-length segment at index {0}")]
    ZeroLengthSegment(usize),
    #[error("curve is not simple (crossing at parameters {0} and {1})")]
    NotSimple(f64, f64),
    #[error("map is not injective")]
    NotInjective,
    #[error("duplicate parameter {0}")]
    DuplicateParameter(f64),
    #[error("parameter {0} outside the curve domain")]
    ParameterOutOfDomain(f64),
    #[error("vectors are complex-linearly dependent")]
    ComplexDependent,
    #[error("function vanishes on or too near the curve")]
    VanishesOnCurve,
    #[error("ball does not meet the curve")]
    BallMissesCurve,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("shrink schedule exhausted: {0}")]
    ShrinkExhausted(String),
    #[error("retry limit exhausted after {attempts} attempts: {detail}")]
    RetriesExhausted { attempts: usize, detail: String },
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Malformed(_) => ErrorKind::Malformed,
            Error::ShrinkExhausted(_) | Error::RetriesExhausted { .. } => ErrorKind::Exhausted,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
