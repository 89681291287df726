use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument outside the supported domain: {0}")]
    OutOfDomain(String),

    /// The requested tolerance cannot be certified at binary64.
    #[error("precision exhausted: achieved bound {achieved:e}, requested {requested:e}")]
    PrecisionExhausted { achieved: f64, requested: f64 },

    #[error(
        "quadrature did not converge: last difference {difference:e}, tolerance {tolerance:e}"
    )]
    QuadratureNonConvergence { difference: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A hypothesis of an estimate (window, threshold) is not satisfied.
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::OutOfDomain(msg.into())
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
