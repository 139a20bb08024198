use thiserror::Error;

/// Errors surfaced by solvers and constructors.
///
/// Dimension mismatches are treated as programming errors and panic via
/// assertions instead of appearing here.
#[derive(Debug, Error)]
pub enum Error {
    /// A method produced a non-finite value. Heavy ball with bad parameters
    /// and gradient descent with an understated L land here; surfacing the
    /// step index is part of the contract.
    #[error("divergence: non-finite value at step {step}")]
    Divergence { step: usize },

    /// Invalid or incompatible configuration (prox/set pairing, composite
    /// term vs. prox setup, missing certificate, bad parameter).
    #[error("configuration error: {0}")]
    Config(String),

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An adaptive method exhausted its trial budget without acceptance;
    /// usually a sign of a broken (e.g. non-convex) oracle.
    #[error("adaptivity failure: budget of {budget} trials exhausted")]
    AdaptivityFailure { budget: usize },

    /// Numerical breakdown (zero curvature in CG and the like).
    #[error("numerical breakdown: {0}")]
    Breakdown(String),

    /// Constraint matrix with numerically vanishing positive spectrum.
    #[error("degenerate constraints: {0}")]
    DegenerateConstraints(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
