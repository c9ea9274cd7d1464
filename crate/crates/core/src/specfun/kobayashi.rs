use num_complex::Complex64;

use super::c;
use crate::error::{Error, Result};
use crate::numerics::{integrate_semi_infinite, integrate_weighted_left, EvalReport, QuadratureSpec};

/// Kobayashi gamma Γ_m(u, v) = ∫₀^∞ t^{u−1} e^{−t} (t + v)^{−m} dt.
pub fn kobayashi_gamma(m: Complex64, u: Complex64, v: Complex64) -> Result<Complex64> {
    Ok(kobayashi_gamma_with(m, u, v, &QuadratureSpec::default())?.value)
}

/// [`kobayashi_gamma`] with an explicit quadrature budget and error report.
pub fn kobayashi_gamma_with(m: Complex64, u: Complex64, v: Complex64, spec: &QuadratureSpec) -> Result<EvalReport> {
    if !(u.re > 0.0) {
        return Err(Error::domain(format!("Kobayashi gamma needs Re(u) > 0 (got {u})")));
    }
    if !(v.re >= 0.0) {
        return Err(Error::domain(format!("Kobayashi gamma needs Re(v) >= 0 (got {v})")));
    }
    let at_zero = v == c(0.0);
    if v.re == 0.0 && !((u - m).re > 0.0) {
        return Err(Error::domain(format!("Kobayashi gamma with Re(v) = 0 needs Re(u − m) > 0 (got u = {u}, m = {m})")));
    }
    let len = v.norm().max(1.0);
    let head = if at_zero {
        let e = u - m - 1.0;
        integrate_weighted_left(
            |s: f64| (Complex64::new(0.0, e.im) * s.ln()).exp() * (-s).exp(),
            len,
            e.re,
            spec,
        )?
    } else {
        integrate_weighted_left(
            |s: f64| (Complex64::new(0.0, u.im) * s.ln() - s - m * (v + s).ln()).exp(),
            len,
            u.re - 1.0,
            spec,
        )?
    };
    let tail = integrate_semi_infinite(
        |w: f64| {
            let t = len + w;
            ((u - 1.0) * t.ln() - t - m * (v + t).ln()).exp()
        },
        1.0,
        spec,
    )?;
    Ok(head.combine(tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{exp_integral_e1, gamma};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn examples() {
        let g = kobayashi_gamma(c(0.0), c(1.3), c(2.0)).unwrap();
        assert!(close(g, gamma(c(1.3)).unwrap(), 1e-10));
        let g = kobayashi_gamma(c(1.0), c(2.5), c(0.0)).unwrap();
        assert!(close(g, gamma(c(1.5)).unwrap(), 1e-10));
        let e1 = exp_integral_e1(c(1.0)).unwrap();
        let g = kobayashi_gamma(c(1.0), c(2.0), c(1.0)).unwrap();
        assert!(close(g, 1.0 - std::f64::consts::E * e1, 1e-10), "{g}");
        assert!(close(g, c(0.403_652_637_676_805_9), 1e-10));
    }

    #[test]
    fn complex_parameters() {
        // mpmath.quad(lambda t: t**(u-1)*exp(-t)*(t+v)**(-m), [0, 1, 4, inf])
        let g = kobayashi_gamma(Complex64::new(-0.5, 0.3), Complex64::new(0.7, 0.2), c(2.5)).unwrap();
        assert!(close(g, Complex64::new(1.885_869_925_034_784, -1.170_547_884_615_804), 1e-9), "{g}");
    }

    #[test]
    fn domain() {
        assert!(kobayashi_gamma(c(1.0), c(0.0), c(1.0)).is_err());
        assert!(kobayashi_gamma(c(1.0), c(1.0), c(0.0)).is_err());
        assert!(kobayashi_gamma(c(1.0), c(1.0), c(-1.0)).is_err());
    }
}
