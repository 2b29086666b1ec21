//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by evaluation, quadrature, series and fitting routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A result is too large (or too small) to represent as `f64`.
    #[error("overflow in {func}: {detail}")]
    Overflow { func: &'static str, detail: String },

    /// An iterative procedure or truncated series did not converge.
    #[error("no convergence in {func}: {detail}")]
    NonConvergence { func: &'static str, detail: String },

    /// Adaptive quadrature hit its subdivision limit before reaching tolerance.
    #[error("quadrature failed: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    /// A matrix could not be factored or inverted.
    #[error("ill-conditioned matrix: {0}")]
    IllConditioned(String),

    /// The data do not satisfy the requirements of the operation.
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// Parameter vector has the wrong length or non-positive entries.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

pub(crate) fn overflow(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Overflow {
        func,
        detail: detail.into(),
    }
}

pub(crate) fn no_convergence(func: &'static str, detail: impl Into<String>) -> Error {
    Error::NonConvergence {
        func,
        detail: detail.into(),
    }
}
