use num_complex::Complex64;

use super::{c, is_nonpositive_integer, ln_gamma, rgamma, sum_series, SeriesSpec};
use crate::error::{Error, Result};

/// Three-parameter (Prabhakar) Mittag-Leffler function
/// E^γ_{μ,ν}(z) = Σ_k (γ)_k z^k / (k! Γ(μk + ν)).
///
/// Summed in log space so that the growing factor (γ)_k z^k / k! and the
/// decaying 1/Γ(μk+ν) do not overflow separately.
pub fn mittag_leffler3(
    mu: Complex64,
    nu: Complex64,
    gammap: Complex64,
    z: Complex64,
    spec: &SeriesSpec,
) -> Result<Complex64> {
    if !(mu.re > 0.0 && nu.re > 0.0) {
        return Err(Error::domain(format!("Mittag-Leffler needs Re(μ) > 0 and Re(ν) > 0 (got μ = {mu}, ν = {nu})")));
    }
    if z == c(0.0) || gammap == c(0.0) {
        return Ok(rgamma(nu));
    }
    let terminates = is_nonpositive_integer(gammap);
    let ln_z = z.ln();
    // log of (γ)_k z^k / k!
    let mut lr = c(0.0);
    let mut dead = false;
    let mut err = None;
    let (sum, _) = sum_series(spec, "Mittag-Leffler series", |k| {
        if k > 0 {
            let p = gammap + (k - 1) as f64;
            if terminates && p == c(0.0) {
                dead = true;
            }
            if !dead {
                lr += p.ln() + ln_z - (k as f64).ln();
            }
        }
        if dead {
            return c(0.0);
        }
        let arg = mu * k as f64 + nu;
        if lr.re < 600.0 {
            lr.exp() * rgamma(arg)
        } else {
            match ln_gamma(arg) {
                Ok(lg) => (lr - lg).exp(),
                Err(e) => {
                    err = Some(e);
                    c(f64::NAN)
                }
            }
        }
    })
    .or_else(|e| if dead { Ok((c(0.0), 0)) } else { Err(e) })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn examples() {
        let s = SeriesSpec::default();
        assert!(close(mittag_leffler3(c(1.0), c(1.0), c(1.0), c(1.0), &s).unwrap(), c(std::f64::consts::E), 1e-15));
        let v = mittag_leffler3(c(0.7), c(2.5), c(1.3), c(0.0), &s).unwrap();
        assert!(close(v, rgamma(c(2.5)), 1e-15));
        assert!(close(mittag_leffler3(c(2.0), c(1.0), c(1.0), c(1.0), &s).unwrap(), c(1f64.cosh()), 1e-15));
    }

    #[test]
    fn exp_reduction() {
        let s = SeriesSpec::default();
        for z in [c(-5.0), c(4.2), Complex64::new(1.5, -3.0), Complex64::new(-2.0, 2.0)] {
            assert!(close(mittag_leffler3(c(1.0), c(1.0), c(1.0), z, &s).unwrap(), z.exp(), 1e-10));
        }
    }

    #[test]
    fn reference_values() {
        let s = SeriesSpec::default();
        // Σ_k rf(γ,k) z^k/(k! Γ(μk+ν)) summed with mpmath at 30 digits
        let got = mittag_leffler3(c(0.8), c(1.1), c(1.3), c(0.5), &s).unwrap();
        assert!(close(got, c(2.045_710_796_186_817_5), 1e-13), "{got}");
        let got = mittag_leffler3(c(1.5), c(0.9), c(2.0), c(-0.4), &s).unwrap();
        assert!(close(got, c(0.376_790_523_609_381_9), 1e-13), "{got}");
    }

    #[test]
    fn terminating_gamma_parameter() {
        // γ = −1: 1/Γ(ν) − z/Γ(μ+ν)
        let s = SeriesSpec::default();
        let (mu, nu, z) = (c(0.5), c(1.5), c(0.8));
        let want = rgamma(nu) - z * rgamma(mu + nu);
        assert!(close(mittag_leffler3(mu, nu, c(-1.0), z, &s).unwrap(), want, 1e-14));
    }

    #[test]
    fn domain() {
        let s = SeriesSpec::default();
        assert!(mittag_leffler3(c(0.0), c(1.0), c(1.0), c(1.0), &s).is_err());
        assert!(mittag_leffler3(c(1.0), c(-1.0), c(1.0), c(1.0), &s).is_err());
    }
}
