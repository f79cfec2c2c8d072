use thiserror::Error;

/// Errors raised by the signature machinery.
///
/// Numerical problems carry enough context (level, ring, parameter) for a
/// caller to decide whether to refine and retry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("continuation failure at level {level}, parameter {parameter:.6}: {reason}")]
    ContinuationFailure {
        level: usize,
        parameter: f64,
        reason: String,
    },

    #[error("unsafe boundary at level {level}: critical value {value} lies within {distance:.3e} of the base polyline")]
    UnsafeBoundary {
        level: usize,
        value: String,
        distance: f64,
    },

    #[error("point lies within {distance:.3e} of the polyline (guard {guard:.3e})")]
    TooCloseToBoundary { distance: f64, guard: f64 },

    #[error("evaluation at a pole of the Blaschke product (zero index {0})")]
    Pole(usize),

    #[error("Blaschke product is not normalized: beta(1) = {0}")]
    NotNormalized(String),

    #[error("resolution failure: {0}")]
    ResolutionFailure(String),

    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),

    #[error("too many indeterminate bits: {indeterminate} of {depth} levels")]
    TooManyIndeterminate { indeterminate: usize, depth: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of the numerical pipeline (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalFailure(_)
                | Error::ContinuationFailure { .. }
                | Error::UnsafeBoundary { .. }
                | Error::TooCloseToBoundary { .. }
                | Error::ResolutionFailure(_)
                | Error::TooManyIndeterminate { .. }
        )
    }
}
