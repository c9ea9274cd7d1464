//! Special functions required by the closed forms: complete and incomplete
//! gamma functions, ₁F₁, ₂F₁, Appell F₁, the three-parameter
//! Mittag-Leffler function and the Kobayashi gamma function.
//!
//! | Function | Method |
//! |----------|--------|
//! | [`gamma`], [`ln_gamma`], [`rgamma`] | Lanczos (g = 607/128, 15 terms), reflection for Re z < ½ |
//! | [`lower_incomplete_gamma`] | power series, complement of the continued fraction for large \|x\| |
//! | [`upper_incomplete_gamma`] | Legendre continued fraction (modified Lentz) |
//! | [`hyp1f1`] | Kummer series, Kummer transformation for Re z < 0 |
//! | [`hyp2f1`] | Gauss series, \|z\| < 1 only |
//! | [`appell_f1`] | double series summed by anti-diagonals |
//! | [`mittag_leffler3`] | power series |
//! | [`kobayashi_gamma`] | graded quadrature plus semi-infinite tail |

mod gamma;
mod hypergeometric;
mod incgamma;
mod kobayashi;
mod mittag_leffler;

pub use gamma::{gamma, ln_gamma, rgamma};
pub use hypergeometric::{appell_f1, hyp1f1, hyp2f1};
pub use incgamma::{exp_integral_e1, lower_incomplete_gamma, upper_incomplete_gamma};
pub(crate) use incgamma::{upper_incomplete_gamma_reduced, upper_incomplete_gamma_scaled};
pub use kobayashi::{kobayashi_gamma, kobayashi_gamma_with};
pub use mittag_leffler::mittag_leffler3;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::EvalReport;

/// Truncation control for power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec {
    pub max_terms: usize,
    /// A series stops once two consecutive terms are below
    /// `tail_tol·|partial sum|`.
    pub tail_tol: f64,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        SeriesSpec { max_terms: 1000, tail_tol: 1e-16 }
    }
}

impl SeriesSpec {
    pub fn new(max_terms: usize, tail_tol: f64) -> Result<Self> {
        let s = SeriesSpec { max_terms, tail_tol };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 16 {
            return Err(Error::domain(format!("max_terms must be at least 16 (got {})", self.max_terms)));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::domain("tail_tol must be positive"));
        }
        Ok(())
    }
}

/// True when `z` is 0, −1, −2, … (to rounding).
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Sums `term(0) + term(1) + …` under the two-consecutive-small-terms rule.
pub(crate) fn sum_series<F>(spec: &SeriesSpec, what: &str, mut term: F) -> Result<(Complex64, usize)>
where
    F: FnMut(usize) -> Complex64,
{
    sum_series_fallible(spec, what, |k| Ok(term(k)))
}

/// [`sum_series`] for terms that may fail.
pub(crate) fn sum_series_fallible<F>(spec: &SeriesSpec, what: &str, mut term: F) -> Result<(Complex64, usize)>
where
    F: FnMut(usize) -> Result<Complex64>,
{
    spec.validate()?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for k in 0..spec.max_terms {
        let t = term(k)?;
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(Error::non_convergent(
                format!("{what}: non-finite term at index {k}"),
                EvalReport { value: sum, err_estimate: f64::INFINITY, effort: k as u64, converged: false },
            ));
        }
        sum += t;
        if t.norm() <= spec.tail_tol * sum.norm() {
            small += 1;
            if small == 2 {
                return Ok((sum, k + 1));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::non_convergent(
        what,
        EvalReport { value: sum, err_estimate: f64::INFINITY, effort: spec.max_terms as u64, converged: false },
    ))
}

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
