use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its node budget.
    #[error("quadrature did not converge after {nodes_used} nodes (best estimate {best_estimate:e}, error estimate {abs_error_estimate:e})")]
    NonConvergence {
        best_estimate: f64,
        abs_error_estimate: f64,
        nodes_used: usize,
    },

    /// A Jacobi recurrence denominator vanished.
    #[error("degenerate Jacobi parameters: {0}")]
    DegenerateParameters(String),

    /// A rational literal could not be parsed.
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
