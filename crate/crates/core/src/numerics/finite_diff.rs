use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::FunctionHandle;

/// Fornberg weights for the k-th derivative at 0 on the integer stencil
/// −p..=p, p = ⌈k/2⌉. The resulting formula is second-order accurate.
pub fn central_weights(k: usize) -> Vec<f64> {
    let p = k.div_ceil(2).max(1) as i64;
    let xs: Vec<f64> = (-p..=p).map(|j| j as f64).collect();
    fornberg_weights(&xs, k)
}

/// Fornberg's algorithm: weights of the k-th derivative at 0 on the nodes `xs`.
pub(crate) fn fornberg_weights(xs: &[f64], k: usize) -> Vec<f64> {
    let n = xs.len();
    // c[j][m]: weight of point j for derivative order m
    let mut c = vec![vec![0.0; k + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0];
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i];
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for m in (1..=mn).rev() {
                    c[i][m] = c1 * (m as f64 * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for m in (1..=mn).rev() {
                c[j][m] = (c4 * c[j][m] - m as f64 * c[j][m - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[k]).collect()
}

/// k-th derivative of a fallible map by central differences at steps h and
/// h/2 combined with one Richardson extrapolation level.
///
/// The stencil must lie inside [lo, hi].
pub fn finite_diff_with<F>(g: F, t: f64, k: usize, h: f64, lo: f64, hi: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if k == 0 {
        return g(t);
    }
    check_step(h)?;
    let p = k.div_ceil(2).max(1) as f64;
    if t - p * h < lo || t + p * h > hi {
        return Err(Error::domain(format!(
            "finite-difference stencil [{}, {}] leaves the domain [{lo}, {hi}]",
            t - p * h,
            t + p * h
        )));
    }
    let offsets: Vec<f64> = (-(p as i64)..=p as i64).map(|j| j as f64).collect();
    Ok(richardson(&g, t, k, h, &offsets)?.0)
}

/// Like [`finite_diff_with`], but falls back to a one-sided stencil of the
/// same order when the central one does not fit in [lo, hi]. Also returns
/// the Richardson correction as an error estimate.
pub(crate) fn derivative_estimate<F>(g: F, t: f64, k: usize, h: f64, lo: f64, hi: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if k == 0 {
        return Ok((g(t)?, 0.0));
    }
    check_step(h)?;
    let p = k.div_ceil(2).max(1) as i64;
    let width = (k + 1) as f64;
    let offsets: Vec<f64> = if t - p as f64 * h >= lo && t + p as f64 * h <= hi {
        (-p..=p).map(|j| j as f64).collect()
    } else if t - width * h >= lo && t <= hi {
        (0..=k + 1).map(|j| -(j as f64)).collect()
    } else if t + width * h <= hi && t >= lo {
        (0..=k + 1).map(|j| j as f64).collect()
    } else {
        return Err(Error::domain(format!("no finite-difference stencil of step {h} fits at t = {t} in [{lo}, {hi}]")));
    };
    richardson(&g, t, k, h, &offsets)
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain(format!("finite-difference step must be positive (got {h})")));
    }
    Ok(())
}

fn richardson<F>(g: &F, t: f64, k: usize, h: f64, offsets: &[f64]) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let weights = fornberg_weights(offsets, k);
    let diff = |step: f64| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in offsets.iter().zip(&weights) {
            if w.abs() < 1e-14 {
                continue;
            }
            acc += g(t + x * step)? * *w;
        }
        Ok(acc / step.powi(k as i32))
    };
    let coarse = diff(h)?;
    let fine = diff(0.5 * h)?;
    Ok(((fine * 4.0 - coarse) / 3.0, (fine - coarse).norm() / 3.0))
}

/// k-th derivative of a function handle; the stencil must stay inside its
/// declared domain.
pub fn finite_diff(g: &FunctionHandle, t: f64, k: usize, h: f64) -> Result<Complex64> {
    let d = g.domain();
    finite_diff_with(|x| g.try_eval(x), t, k, h, d.a, d.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{FunctionHandle, Interval, Regularity};

    fn handle(f: fn(f64) -> f64) -> FunctionHandle {
        FunctionHandle::from_real(Interval::new(-10.0, 10.0).unwrap(), Regularity::Smooth, f)
    }

    #[test]
    fn stencil_weights() {
        assert_eq!(central_weights(1), vec![-0.5, 0.0, 0.5]);
        assert_eq!(central_weights(2), vec![1.0, -2.0, 1.0]);
        let w3 = central_weights(3);
        let expected = [-0.5, 1.0, 0.0, -1.0, 0.5];
        for (a, b) in w3.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn examples() {
        let d = finite_diff(&handle(|t| t * t), 1.0, 1, 1e-3).unwrap();
        assert!((d.re - 2.0).abs() < 1e-9);
        let d = finite_diff(&handle(f64::exp), 0.0, 2, 1e-2).unwrap();
        assert!((d.re - 1.0).abs() < 1e-7, "{d}");
        let d = finite_diff(&handle(f64::sin), 0.0, 1, 1e-3).unwrap();
        assert!((d.re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn third_and_fourth_derivatives() {
        let d = finite_diff(&handle(f64::exp), 0.5, 3, 1e-2).unwrap();
        assert!((d.re - 0.5f64.exp()).abs() < 1e-6, "{d}");
        let d = finite_diff(&handle(f64::exp), 0.5, 4, 2e-2).unwrap();
        assert!((d.re - 0.5f64.exp()).abs() < 1e-5, "{d}");
    }

    #[test]
    fn one_sided_fallback() {
        let g = |t: f64| Ok(Complex64::new(t.exp(), 0.0));
        let (d, err) = derivative_estimate(g, 1.0, 1, 1e-3, 0.0, 1.0).unwrap();
        assert!((d.re - 1f64.exp()).abs() < 1e-8, "{d}");
        assert!(err < 1e-5);
        let (d, _) = derivative_estimate(g, 0.0, 2, 1e-3, 0.0, 1.0).unwrap();
        assert!((d.re - 1.0).abs() < 1e-5, "{d}");
        assert!(derivative_estimate(g, 0.5, 1, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn stencil_outside_domain() {
        let g = FunctionHandle::from_real(Interval::new(0.0, 1.0).unwrap(), Regularity::Smooth, |t| t);
        assert!(matches!(finite_diff(&g, 0.0005, 1, 1e-3), Err(Error::Domain(_))));
    }
}
