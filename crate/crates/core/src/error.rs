use thiserror::Error;

/// Errors raised by the transform library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} is undefined at {at}")]
    Domain { what: &'static str, at: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("evaluation point {t} is not a grid node")]
    OffGrid { t: f64 },

    #[error("quadrature did not converge (achieved error estimate {estimate:e}, target {target:e})")]
    NonConvergence { estimate: f64, target: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("input has zero norm")]
    ZeroNorm,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
