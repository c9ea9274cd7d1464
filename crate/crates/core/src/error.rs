use thiserror::Error;

use crate::numerics::EvalReport;

/// Errors raised by operators, special functions and verification checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("{what} did not converge (err estimate {:.3e} after {} evaluations)", partial.err_estimate, partial.effort)]
    NonConvergent { what: String, partial: EvalReport },

    #[error("regularity: {0}")]
    Regularity(String),

    #[error("non-finite value encountered at t = {at}")]
    NonFinite { at: f64 },

    #[error("cost exceeded: {needed} evaluations requested, budget is {budget}")]
    CostExceeded { needed: u64, budget: u64 },

    #[error("functions are not synchronous: {0}")]
    Synchrony(String),

    #[error("function is not increasing: {0}")]
    Monotonicity(String),

    #[error("function is not positive: {0}")]
    Positivity(String),

    #[error(transparent)]
    Parse(#[from] crate::expr::ParseError),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn non_convergent(what: impl Into<String>, partial: EvalReport) -> Self {
        Error::NonConvergent { what: what.into(), partial }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
