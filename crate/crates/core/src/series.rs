//! Tempered operators as series of Riemann–Liouville differintegrals:
//!
//! ```text
//! I^{(α,β)} f = Σₘ (−β)^m Γ(α+m)/(m! Γ(α)) · I^{α+m} f
//! D^{(α,β)} f = Σₘ (−β)^m Γ(m−α)/(m! Γ(−α)) · I^{m−α} f
//! ```
//!
//! where I^{ν} with Re ν ≤ 0 means the RL derivative of order −ν.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::numerics::{EvalReport, QuadratureSpec};
use crate::operators::{
    apply_proportional, inner_spec, kernel_integral, rl_derivative, FracParams,
};
use crate::specfun::{is_nonpositive_integer, rgamma, SeriesSpec};
use crate::theorems::{input, relative_residual, TheoremId, VerificationRecord};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// (−β)^m Γ(α+m)/(m! Γ(α)), by the recurrence
/// c_{m+1} = c_m·(−β)(α+m)/(m+1).
pub fn series_coefficient(m: usize, p: &FracParams) -> Complex64 {
    (0..m).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (-p.beta) * (p.alpha + k as f64) / (k + 1) as f64)
}

/// Individual terms of a truncated series together with the summary report.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTrace {
    pub terms: Vec<Complex64>,
    pub report: EvalReport,
}

impl SeriesTrace {
    /// Partial sums S_0, S_1, …, S_{M−1}.
    pub fn partial_sums(&self) -> Vec<Complex64> {
        self.terms
            .iter()
            .scan(ZERO, |acc, t| {
                *acc += *t;
                Some(*acc)
            })
            .collect()
    }
}

/// Sums terms under the two-consecutive-small-terms rule; `term(m)` returns
/// the term and its error estimate.
fn run_series<F>(sspec: &SeriesSpec, what: &str, mut term: F) -> Result<SeriesTrace>
where
    F: FnMut(usize) -> Result<EvalReport>,
{
    sspec.validate()?;
    let mut terms = Vec::new();
    let mut total = EvalReport::exact(ZERO);
    let mut small = 0;
    for m in 0..sspec.max_terms {
        let r = term(m)?;
        terms.push(r.value);
        total.value += r.value;
        total.err_estimate += r.err_estimate;
        total.converged &= r.converged;
        if r.value.norm() <= sspec.tail_tol * total.value.norm() {
            small += 1;
            if small == 2 {
                total.effort = terms.len() as u64;
                return Ok(SeriesTrace { terms, report: total });
            }
        } else {
            small = 0;
        }
    }
    total.effort = terms.len() as u64;
    total.converged = false;
    Err(Error::non_convergent(format!("{what} (|β(t−a)| too large for max_terms?)"), total))
}

fn check(f: &FunctionHandle, a: f64, t: f64) -> Result<()> {
    let d = f.domain();
    if !(a >= d.a && t <= d.b && a <= t) {
        return Err(Error::domain(format!("need domain.a ≤ a ≤ t ≤ domain.b (got a = {a}, t = {t})")));
    }
    Ok(())
}

/// Series route for the tempered integral, with per-term detail.
pub fn series_integral_trace(
    f: &FunctionHandle,
    p: &FracParams,
    a: f64,
    t: f64,
    sspec: &SeriesSpec,
    qspec: &QuadratureSpec,
) -> Result<SeriesTrace> {
    if !(p.alpha.re > 0.0) {
        return Err(Error::domain(format!("series integral requires Re(α) > 0 (got α = {})", p.alpha)));
    }
    check(f, a, t)?;
    let beta_zero = p.beta == ZERO;
    // (−β)^m / (m! Γ(α)); the Γ(α+m) of the coefficient cancels the RL norm
    let mut scale = rgamma(p.alpha);
    run_series(sspec, "series integral", |m| {
        if m > 0 {
            scale *= -p.beta / m as f64;
        }
        if beta_zero && m > 0 {
            return Ok(EvalReport::exact(ZERO));
        }
        let k = kernel_integral(|u| f.eval(u), p.alpha + m as f64, ZERO, a, t, qspec)?;
        Ok(k.scaled(scale))
    })
}

/// Σₘ (−β)^m Γ(α+m)/(m! Γ(α)) · RL I^{α+m} f(t).
pub fn series_integral(
    f: &FunctionHandle,
    p: &FracParams,
    a: f64,
    t: f64,
    sspec: &SeriesSpec,
    qspec: &QuadratureSpec,
) -> Result<EvalReport> {
    Ok(series_integral_trace(f, p, a, t, sspec, qspec)?.report)
}

/// Series route for the tempered derivative, with per-term detail.
pub fn series_derivative_trace(
    f: &FunctionHandle,
    p: &FracParams,
    a: f64,
    t: f64,
    sspec: &SeriesSpec,
    qspec: &QuadratureSpec,
) -> Result<SeriesTrace> {
    if !(p.alpha.re >= 0.0) {
        return Err(Error::domain(format!("series derivative requires Re(α) ≥ 0 (got α = {})", p.alpha)));
    }
    if is_nonpositive_integer(-p.alpha) {
        return Err(Error::Pole(format!("series derivative: Γ(−α) has a pole at α = {}", p.alpha)));
    }
    check(f, a, t)?;
    if t == a {
        return Err(Error::domain("series derivative needs t > a"));
    }
    let beta_zero = p.beta == ZERO;
    // (−β)^m / (m! Γ(−α))
    let mut scale = rgamma(-p.alpha);
    run_series(sspec, "series derivative", |m| {
        if m > 0 {
            scale *= -p.beta / m as f64;
        }
        if beta_zero && m > 0 {
            return Ok(EvalReport::exact(ZERO));
        }
        let order = Complex64::new(m as f64, 0.0) - p.alpha;
        if order.re > 0.0 {
            let k = kernel_integral(|u| f.eval(u), order, ZERO, a, t, qspec)?;
            Ok(k.scaled(scale))
        } else {
            // Γ(m−α)·scale is the series coefficient; D^{α−m} = I^{m−α}
            let d = rl_derivative(f, -order, a, t, qspec)?;
            Ok(d.scaled(scale / rgamma(order)))
        }
    })
}

/// Σₘ (−β)^m Γ(m−α)/(m! Γ(−α)) · RL I^{m−α} f(t), with the leading terms of
/// negative order evaluated as RL derivatives.
pub fn series_derivative(
    f: &FunctionHandle,
    p: &FracParams,
    a: f64,
    t: f64,
    sspec: &SeriesSpec,
    qspec: &QuadratureSpec,
) -> Result<EvalReport> {
    Ok(series_derivative_trace(f, p, a, t, sspec, qspec)?.report)
}

/// Checks (d/dt + β)·[series for I^{(α,β)} f] = series for I^{(α−1,β)} f at t.
pub fn proportional_step_check(
    f: &FunctionHandle,
    p: &FracParams,
    a: f64,
    t: f64,
    sspec: &SeriesSpec,
    qspec: &QuadratureSpec,
) -> Result<VerificationRecord> {
    if !(p.alpha.re > 1.0) {
        return Err(Error::domain(format!("proportional step check requires Re(α) > 1 (got α = {})", p.alpha)));
    }
    check(f, a, t)?;
    let inner = inner_spec(qspec);
    let j = |x: f64| series_integral(f, p, a, x, sspec, &inner);
    let lhs = apply_proportional(j, p.beta, 1.0, 1, t, a, f.domain().b)?.value;
    let lower = FracParams { alpha: p.alpha - 1.0, beta: p.beta };
    let rhs = series_integral(f, &lower, a, t, sspec, qspec)?.value;
    let inputs = vec![input("alpha", p.alpha), input("beta", p.beta), input("a", a), input("t", t)];
    Ok(VerificationRecord::identity(TheoremId::ProportionalStep, inputs, lhs, rhs, relative_residual(lhs, rhs), 1e-5))
}
