use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Root bracket does not contain a sign change.
    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    /// An iterative method exhausted its iteration budget.
    #[error("no convergence after {iterations} iterations ({context})")]
    NoConvergence {
        iterations: usize,
        context: &'static str,
    },
    /// Non-finite value where a finite one is required.
    #[error("non-finite value encountered at {at} ({context})")]
    NonFinite { at: f64, context: &'static str },
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Operation not defined for this marginal (e.g. non-monotone density).
    #[error("unsupported distribution: {0}")]
    Unsupported(String),
    /// The requested quantity diverges for this input.
    #[error("divergent quantity: {0}")]
    Divergent(String),
    /// Malformed input data (quantile tables, config files).
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
