//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by constructors, receivers and the expansion engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to reach its stated accuracy.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The symmetric logarithmic derivative does not exist for the requested
    /// direction: the residual of the defining equation exceeds the limit.
    #[error("SLD undefined for this direction (residual {residual:e})")]
    SldUndefined { residual: f64 },

    /// Node doubling did not bring successive quadrature values into
    /// agreement.
    #[error("quadrature non-convergence: node-doubling disagreement {disagreement:e} at {nodes} nodes")]
    QuadratureDivergence { disagreement: f64, nodes: usize },

    /// The requested Fock-space truncation leaves too much probability mass
    /// outside the retained basis.
    #[error("Fock truncation too small: neglected mass {neglected:e} at dimension {dim}")]
    Truncation { neglected: f64, dim: usize },

    /// A bracketing search found no sign change over its interval.
    #[error("algorithm error: {0}")]
    Algorithm(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
