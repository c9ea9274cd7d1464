//! Closed forms of tempered integrals and derivatives for power,
//! beta-type, Appell-type and Mittag-Leffler kernels.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::FracParams;
use crate::specfun::{
    appell_f1, gamma, hyp1f1, hyp2f1, is_nonpositive_integer, mittag_leffler3, rgamma, sum_series_fallible, SeriesSpec,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn cpow(x: f64, e: Complex64) -> Complex64 {
    (e * x.ln()).exp()
}

/// Kernel u ↦ (u−a)^{ν−1} E^γ_{μ,ν}(ω (u−a)^μ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlKernelParams {
    pub mu: Complex64,
    pub nu: Complex64,
    pub gammap: Complex64,
    pub omega: Complex64,
}

impl MlKernelParams {
    pub fn new(mu: Complex64, nu: Complex64, gammap: Complex64, omega: Complex64) -> Result<Self> {
        if !(mu.re > 0.0 && nu.re > 0.0) {
            return Err(Error::domain(format!("ML kernel needs Re(μ) > 0 and Re(ν) > 0 (got μ = {mu}, ν = {nu})")));
        }
        Ok(MlKernelParams { mu, nu, gammap, omega })
    }

    /// The kernel at distance x = u − a > 0.
    pub fn eval(&self, x: f64, sspec: &SeriesSpec) -> Result<Complex64> {
        let z = self.omega * cpow(x, self.mu);
        Ok(cpow(x, self.nu - 1.0) * mittag_leffler3(self.mu, self.nu, self.gammap, z, sspec)?)
    }
}

/// Kernel u ↦ u^{μ−1} (1 − a·u)^{−λ} (1 − b·u)^{−exponent2} (with a = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppellKernelParams {
    pub mu: Complex64,
    pub lambda: Complex64,
    pub exponent2: Complex64,
    pub acoef: Complex64,
    pub bcoef: Complex64,
}

impl AppellKernelParams {
    pub fn new(mu: Complex64, lambda: Complex64, exponent2: Complex64, acoef: Complex64, bcoef: Complex64) -> Result<Self> {
        if !(mu.re > 0.0) {
            return Err(Error::domain(format!("Appell kernel needs Re(μ) > 0 (got μ = {mu})")));
        }
        Ok(AppellKernelParams { mu, lambda, exponent2, acoef, bcoef })
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        let one_a = ONE - self.acoef * u;
        let one_b = ONE - self.bcoef * u;
        cpow(u, self.mu - 1.0) * (-self.lambda * one_a.ln() - self.exponent2 * one_b.ln()).exp()
    }
}

/// I^{(α,β)} (t−a)^λ = (t−a)^{λ+α} Γ(λ+1)/Γ(λ+α+1) ₁F₁(α; λ+α+1; −β(t−a)).
pub fn power_integral_closed(lambda: Complex64, p: &FracParams, a: f64, t: f64) -> Result<Complex64> {
    if !(lambda.re > -1.0) {
        return Err(Error::domain(format!("power kernel needs Re(λ) > −1 (got {lambda})")));
    }
    if !(t > a) {
        return Err(Error::domain(format!("need t > a (got a = {a}, t = {t})")));
    }
    let x = t - a;
    let top = lambda + p.alpha + 1.0;
    let f = hyp1f1(p.alpha, top, -p.beta * x, &SeriesSpec::default())?;
    Ok(cpow(x, lambda + p.alpha) * gamma(lambda + 1.0)? * rgamma(top) * f)
}

/// D^{(α,β)} (t−a)^λ = (t−a)^{λ−α} Γ(λ+1)/Γ(λ−α+1) ₁F₁(−α; λ−α+1; −β(t−a)).
pub fn power_derivative_closed(lambda: Complex64, p: &FracParams, a: f64, t: f64) -> Result<Complex64> {
    if !(lambda.re > -1.0) {
        return Err(Error::domain(format!("power kernel needs Re(λ) > −1 (got {lambda})")));
    }
    if !(t > a) {
        return Err(Error::domain(format!("need t > a (got a = {a}, t = {t})")));
    }
    let low = lambda - p.alpha + 1.0;
    if is_nonpositive_integer(low) {
        return Err(Error::Pole(format!("λ − α + 1 = {low} is a non-positive integer")));
    }
    let x = t - a;
    let f = hyp1f1(-p.alpha, low, -p.beta * x, &SeriesSpec::default())?;
    Ok(cpow(x, lambda - p.alpha) * gamma(lambda + 1.0)? * rgamma(low) * f)
}

/// Σₘ (α)_m/(μ+α)_m · (−βt)^m/m! · inner(m), scaled by
/// t^{μ+α−1} Γ(μ)/Γ(μ+α). Shared by the beta and Appell kernels.
fn hyper_kernel_series<F>(mu: Complex64, alpha: Complex64, beta: Complex64, t: f64, sspec: &SeriesSpec, mut inner: F) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut coef = ONE;
    let (sum, _) = sum_series_fallible(sspec, "kernel series", |m| {
        if m > 0 {
            let k = (m - 1) as f64;
            coef *= (alpha + k) / (mu + alpha + k) * (-beta * t) / m as f64;
        }
        Ok(coef * inner(mu + alpha + m as f64)?)
    })?;
    Ok(cpow(t, mu + alpha - 1.0) * gamma(mu)? * rgamma(mu + alpha) * sum)
}

/// Tempered integral (a = 0) of u^{μ−1}(1−u)^{−λ}, for 0 < t < 1.
///
/// Passing −α in `p.alpha` gives the corresponding derivative for
/// 0 < Re α < 1.
pub fn beta_kernel_closed(mu: Complex64, lambda: Complex64, p: &FracParams, t: f64, sspec: &SeriesSpec) -> Result<Complex64> {
    beta_kernel_closed_raw(mu, lambda, p.alpha, p.beta, t, sspec)
}

/// [`beta_kernel_closed`] with unconstrained α (negative real part allowed).
pub fn beta_kernel_closed_raw(mu: Complex64, lambda: Complex64, alpha: Complex64, beta: Complex64, t: f64, sspec: &SeriesSpec) -> Result<Complex64> {
    if !(mu.re > 0.0) {
        return Err(Error::domain(format!("beta kernel needs Re(μ) > 0 (got {mu})")));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("beta kernel needs 0 < t < 1 (got {t})")));
    }
    let z = Complex64::new(t, 0.0);
    hyper_kernel_series(mu, alpha, beta, t, sspec, |c| hyp2f1(mu, lambda, c, z, sspec))
}

/// Tempered integral (a = 0) of u^{μ−1}(1−a·u)^{−λ}(1−b·u)^{−exponent2}.
pub fn appell_kernel_closed(k: &AppellKernelParams, p: &FracParams, t: f64, sspec: &SeriesSpec) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("Appell kernel needs t > 0 (got {t})")));
    }
    let (x, y) = (k.acoef * t, k.bcoef * t);
    if !(x.norm() < 1.0 && y.norm() < 1.0) {
        return Err(Error::domain("Appell kernel needs |a·t| < 1 and |b·t| < 1"));
    }
    hyper_kernel_series(k.mu, p.alpha, p.beta, t, sspec, |c| appell_f1(k.mu, k.lambda, k.exponent2, c, x, y, sspec))
}

fn check_ml(k: &MlKernelParams, p: &FracParams, a: f64, t: f64) -> Result<()> {
    MlKernelParams::new(k.mu, k.nu, k.gammap, k.omega)?;
    if !(p.alpha.re > 0.0) {
        return Err(Error::domain(format!("ML closed form requires Re(α) > 0 (got {})", p.alpha)));
    }
    if !(t > a) {
        return Err(Error::domain(format!("need t > a (got a = {a}, t = {t})")));
    }
    Ok(())
}

/// Σₘ (−β)^m Γ(α+m)/(m! Γ(α)) (t−a)^{ν+α+m−1} E^γ_{μ,ν+α+m}(ω(t−a)^μ).
pub fn ml_kernel_closed_mform(k: &MlKernelParams, p: &FracParams, a: f64, t: f64, sspec: &SeriesSpec) -> Result<Complex64> {
    check_ml(k, p, a, t)?;
    let x = t - a;
    let z = k.omega * cpow(x, k.mu);
    let mut coef = ONE;
    let (sum, _) = sum_series_fallible(sspec, "ML m-series", |m| {
        if m > 0 {
            let j = (m - 1) as f64;
            coef *= -p.beta * (p.alpha + j) / m as f64 * x;
        }
        let order = k.nu + p.alpha + m as f64;
        Ok(coef * mittag_leffler3(k.mu, order, k.gammap, z, sspec)?)
    })?;
    Ok(cpow(x, k.nu + p.alpha - 1.0) * sum)
}

/// Σₖ (γ)_k ω^k/(k! Γ(μk+ν+α)) (t−a)^{μk+ν+α−1} ₁F₁(α; μk+ν+α; −β(t−a)).
pub fn ml_kernel_closed_kform(k: &MlKernelParams, p: &FracParams, a: f64, t: f64, sspec: &SeriesSpec) -> Result<Complex64> {
    check_ml(k, p, a, t)?;
    let x = t - a;
    let z = k.omega * cpow(x, k.mu);
    let arg = -p.beta * x;
    let mut coef = ONE;
    let mut dead = false;
    let (sum, _) = sum_series_fallible(sspec, "ML k-series", |j| {
        if j > 0 {
            let pj = k.gammap + (j - 1) as f64;
            dead |= pj == Complex64::new(0.0, 0.0);
            coef *= pj * z / j as f64;
        }
        if dead || coef == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let c = k.mu * j as f64 + k.nu + p.alpha;
        Ok(coef * rgamma(c) * hyp1f1(p.alpha, c, arg, sspec)?)
    })?;
    Ok(cpow(x, k.nu + p.alpha - 1.0) * sum)
}

/// |mform − kform| / (|mform| + |kform| + ε).
pub fn ml_identity_residual(k: &MlKernelParams, p: &FracParams, a: f64, t: f64, sspec: &SeriesSpec) -> Result<f64> {
    if !(p.beta.re > 0.0) {
        return Err(Error::domain("the ML identity is stated for Re(β) > 0"));
    }
    let m = ml_kernel_closed_mform(k, p, a, t, sspec)?;
    let kf = ml_kernel_closed_kform(k, p, a, t, sspec)?;
    Ok((m - kf).norm() / (m.norm() + kf.norm() + f64::EPSILON))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{FunctionHandle, Interval, Regularity};
    use crate::numerics::QuadratureSpec;
    use crate::operators::{tempered_derivative, tempered_integral};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn power_integral_examples() {
        let p = FracParams::real(0.5, 0.0).unwrap();
        assert!(rel(power_integral_closed(c(1.0), &p, 0.0, 1.0).unwrap(), c(0.752_252_778_063_675_1)) < 1e-14);
        let p = FracParams::real(1.0, 1.0).unwrap();
        assert!(rel(power_integral_closed(c(0.0), &p, 0.0, 1.0).unwrap(), c(1.0 - (-1f64).exp())) < 1e-14);
        // mpmath.quad of the defining integral
        let p = FracParams::real(0.6, 0.8).unwrap();
        let v = power_integral_closed(c(1.4), &p, 0.0, 0.7).unwrap();
        assert!(rel(v, c(0.273_722_318_537_190_3)) < 1e-12, "{v}");
    }

    #[test]
    fn power_derivative_examples() {
        let p = FracParams::real(0.5, 0.0).unwrap();
        assert!(rel(power_derivative_closed(c(1.0), &p, 0.0, 1.0).unwrap(), c(std::f64::consts::FRAC_2_SQRT_PI)) < 1e-14);
        let p = FracParams::real(0.0, 0.9).unwrap();
        assert!(rel(power_derivative_closed(c(1.7), &p, 0.0, 0.6).unwrap(), c(0.6f64.powf(1.7))) < 1e-14);
        let p = FracParams::real(0.6, 0.8).unwrap();
        let v = power_derivative_closed(c(1.4), &p, 0.0, 0.7).unwrap();
        assert!(rel(v, c(1.182_754_767_795_700_9)) < 1e-12, "{v}");
        let p = FracParams::real(2.5, 0.1).unwrap();
        assert!(matches!(power_derivative_closed(c(0.5), &p, 0.0, 0.7), Err(Error::Pole(_))));
    }

    #[test]
    fn example1_against_quadrature() {
        let q = QuadratureSpec::default();
        let f = FunctionHandle::from_real(Interval::new(0.0, 2.0).unwrap(), Regularity::Smooth, |t| t.powf(1.4));
        let p = FracParams::real(0.6, 0.8).unwrap();
        let i = tempered_integral(&f, &p, 0.0, 0.7, &q).unwrap().value;
        assert!(rel(i, power_integral_closed(c(1.4), &p, 0.0, 0.7).unwrap()) < 1e-8);
        let d = tempered_derivative(&f, &p, 0.0, 0.7, &q).unwrap().value;
        assert!(rel(d, power_derivative_closed(c(1.4), &p, 0.0, 0.7).unwrap()) < 1e-6);
    }

    #[test]
    fn beta_kernel_cases() {
        let s = SeriesSpec::default();
        // β = 0: Γ(μ)/Γ(μ+α) t^{μ+α−1} ₂F₁(μ, λ; μ+α; t)
        let p = FracParams::real(0.5, 0.0).unwrap();
        let v = beta_kernel_closed(c(1.0), c(0.5), &p, 0.5, &s).unwrap();
        let want = gamma(c(1.0)).unwrap() * rgamma(c(1.5)) * 0.5f64.sqrt() * hyp2f1(c(1.0), c(0.5), c(1.5), c(0.5), &s).unwrap();
        assert!(rel(v, want) < 1e-14);
        // λ = 0 reduces to the power rule with λ = μ − 1
        let p = FracParams::real(0.7, 0.9).unwrap();
        let v = beta_kernel_closed(c(1.6), c(0.0), &p, 0.45, &s).unwrap();
        assert!(rel(v, power_integral_closed(c(0.6), &p, 0.0, 0.45).unwrap()) < 1e-10);
        // quadrature oracle
        let q = QuadratureSpec::default();
        let f = FunctionHandle::from_real(Interval::new(0.0, 0.99).unwrap(), Regularity::Smooth, |u| (1.0 - u).powf(-0.3));
        let p = FracParams::real(0.7, 0.5).unwrap();
        let v = beta_kernel_closed(c(1.0), c(0.3), &p, 0.4, &s).unwrap();
        let w = tempered_integral(&f, &p, 0.0, 0.4, &q).unwrap().value;
        assert!(rel(v, w) < 1e-8, "{v} vs {w}");
        assert!(beta_kernel_closed(c(1.0), c(0.3), &p, 1.2, &s).is_err());
    }

    #[test]
    fn appell_kernel_cases() {
        let s = SeriesSpec::default();
        let p = FracParams::real(0.6, 0.7).unwrap();
        let k = AppellKernelParams::new(c(1.2), c(0.4), c(0.3), c(1.0), c(0.0)).unwrap();
        let v = appell_kernel_closed(&k, &p, 0.5, &s).unwrap();
        assert!(rel(v, beta_kernel_closed(c(1.2), c(0.4), &p, 0.5, &s).unwrap()) < 1e-12);
        let k = AppellKernelParams::new(c(1.2), c(0.4), c(0.3), c(0.5), c(0.25)).unwrap();
        let v = appell_kernel_closed(&k, &p, 0.8, &s).unwrap();
        let q = QuadratureSpec::default();
        let f = FunctionHandle::new(Interval::new(0.0, 1.0).unwrap(), Regularity::Smooth, move |u| k.eval(u));
        let w = tempered_integral(&f, &p, 0.0, 0.8, &q).unwrap().value;
        assert!(rel(v, w) < 1e-8, "{v} vs {w}");
    }

    #[test]
    fn ml_forms() {
        let s = SeriesSpec::default();
        let p = FracParams::real(0.6, 0.7).unwrap();
        // ω = 0: power rule with λ = ν − 1, divided by Γ(ν)
        let k0 = MlKernelParams::new(c(0.8), c(1.1), c(1.3), c(0.0)).unwrap();
        let want = power_integral_closed(c(0.1), &p, 0.0, 1.0).unwrap() * rgamma(c(1.1));
        assert!(rel(ml_kernel_closed_mform(&k0, &p, 0.0, 1.0, &s).unwrap(), want) < 1e-9);
        assert!(rel(ml_kernel_closed_kform(&k0, &p, 0.0, 1.0, &s).unwrap(), want) < 1e-12);
        assert!(ml_identity_residual(&k0, &p, 0.0, 1.0, &s).unwrap() < 1e-12);

        let k = MlKernelParams::new(c(0.8), c(1.1), c(1.3), c(0.5)).unwrap();
        assert!(ml_identity_residual(&k, &p, 0.0, 1.0, &s).unwrap() < 1e-8);
        let q = QuadratureSpec::default();
        let f = FunctionHandle::new(Interval::new(0.0, 2.0).unwrap(), Regularity::Smooth, move |u| {
            k.eval(u, &SeriesSpec::default()).unwrap_or(Complex64::new(f64::NAN, 0.0))
        });
        let w = tempered_integral(&f, &p, 0.0, 1.0, &q).unwrap().value;
        assert!(rel(ml_kernel_closed_mform(&k, &p, 0.0, 1.0, &s).unwrap(), w) < 1e-8);

        let k = MlKernelParams::new(c(1.5), c(0.9), c(2.0), c(-0.4)).unwrap();
        let p = FracParams::real(1.2, 1.0).unwrap();
        assert!(ml_identity_residual(&k, &p, 0.3, 0.8, &s).unwrap() < 1e-8);
    }
}
