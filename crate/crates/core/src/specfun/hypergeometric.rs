use num_complex::Complex64;

use super::{c, is_nonpositive_integer, sum_series, SeriesSpec};
use crate::error::{Error, Result};
use crate::numerics::EvalReport;

fn check_lower(name: &str, cc: Complex64) -> Result<()> {
    if is_nonpositive_integer(cc) {
        return Err(Error::Pole(format!("{name}: lower parameter {cc} is a non-positive integer")));
    }
    Ok(())
}

fn kummer_series(a: Complex64, b: Complex64, z: Complex64, spec: &SeriesSpec) -> Result<Complex64> {
    let mut term = c(1.0);
    let (sum, _) = sum_series(spec, "1F1 series", |m| {
        if m > 0 {
            let k = (m - 1) as f64;
            term *= (a + k) / (b + k) * z / m as f64;
        }
        term
    })?;
    Ok(sum)
}

/// Confluent hypergeometric ₁F₁(a; b; z).
///
/// For Re z < 0 the Kummer transformation e^{z}·₁F₁(b−a; b; −z) is summed
/// instead, which keeps the terms positive for real arguments.
pub fn hyp1f1(a: Complex64, b: Complex64, z: Complex64, spec: &SeriesSpec) -> Result<Complex64> {
    check_lower("1F1", b)?;
    if z == c(0.0) || a == c(0.0) {
        return Ok(c(1.0));
    }
    if z.re < 0.0 && !is_nonpositive_integer(a) {
        return Ok(z.exp() * kummer_series(b - a, b, -z, spec)?);
    }
    kummer_series(a, b, z, spec)
}

/// Gauss hypergeometric ₂F₁(a, b; c; z) for |z| < 1.
pub fn hyp2f1(a: Complex64, b: Complex64, cc: Complex64, z: Complex64, spec: &SeriesSpec) -> Result<Complex64> {
    check_lower("2F1", cc)?;
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("2F1 series needs |z| < 1 (got |z| = {})", z.norm())));
    }
    let mut term = c(1.0);
    let (sum, _) = sum_series(spec, "2F1 series", |m| {
        if m > 0 {
            let k = (m - 1) as f64;
            term *= (a + k) * (b + k) / (cc + k) * z / m as f64;
        }
        term
    })?;
    Ok(sum)
}

/// Appell F₁(a; b1, b2; c; x, y) for |x|, |y| < 1, summed by anti-diagonals
/// m + n = d. Stops after two consecutive diagonals below
/// `tail_tol·|partial sum|`.
pub fn appell_f1(
    a: Complex64,
    b1: Complex64,
    b2: Complex64,
    cc: Complex64,
    x: Complex64,
    y: Complex64,
    spec: &SeriesSpec,
) -> Result<Complex64> {
    spec.validate()?;
    check_lower("F1", cc)?;
    if !(x.norm() < 1.0 && y.norm() < 1.0) {
        return Err(Error::domain("Appell F1 series needs |x| < 1 and |y| < 1"));
    }
    // p[m] = (b1)_m x^m / m!, q[n] = (b2)_n y^n / n!
    let mut p = vec![c(1.0)];
    let mut q = vec![c(1.0)];
    let mut ratio = c(1.0); // (a)_d / (c)_d
    let mut sum = c(0.0);
    let mut small = 0;
    for d in 0..spec.max_terms {
        if d > 0 {
            let k = (d - 1) as f64;
            ratio *= (a + k) / (cc + k);
            p.push(p[d - 1] * (b1 + k) * x / d as f64);
            q.push(q[d - 1] * (b2 + k) * y / d as f64);
        }
        let diag: Complex64 = (0..=d).map(|m| p[m] * q[d - m]).sum::<Complex64>() * ratio;
        if !(diag.re.is_finite() && diag.im.is_finite()) {
            break;
        }
        sum += diag;
        if diag.norm() <= spec.tail_tol * sum.norm() {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::non_convergent(
        "Appell F1 series",
        EvalReport { value: sum, err_estimate: f64::INFINITY, effort: spec.max_terms as u64, converged: false },
    ))
}
