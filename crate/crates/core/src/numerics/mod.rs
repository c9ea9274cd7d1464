//! Quadrature and finite-difference engines shared by every operator.
//!
//! All routines are pure functions of their arguments. Integrands are plain
//! closures `Fn(f64) -> Complex64`; a non-finite sample aborts the integral
//! with [`Error::NonFinite`](crate::Error::NonFinite).

mod finite_diff;
mod gauss;
mod quadrature;

pub use finite_diff::{central_weights, finite_diff, finite_diff_with};
pub(crate) use finite_diff::derivative_estimate;
pub(crate) use quadrature::adaptive;
pub use gauss::{gauss_legendre, GaussRule};
pub use quadrature::{
    integrate_interval, integrate_semi_infinite, integrate_weighted_left, QuadratureSpec,
};

use num_complex::Complex64;

/// A computed value together with its error estimate and the work spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub value: Complex64,
    pub err_estimate: f64,
    /// Integrand samples (quadrature) or series terms consumed.
    pub effort: u64,
    pub converged: bool,
}

impl EvalReport {
    pub fn exact(value: Complex64) -> Self {
        EvalReport { value, err_estimate: 0.0, effort: 0, converged: true }
    }

    /// Multiplies value and error estimate by a constant factor.
    pub fn scaled(self, factor: Complex64) -> Self {
        EvalReport {
            value: self.value * factor,
            err_estimate: self.err_estimate * factor.norm(),
            ..self
        }
    }

    /// Sum of two independent reports.
    pub fn combine(self, other: EvalReport) -> Self {
        EvalReport {
            value: self.value + other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            effort: self.effort + other.effort,
            converged: self.converged && other.converged,
        }
    }
}
