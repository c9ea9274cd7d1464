use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::{FunctionHandle, Interval, Regularity};
use crate::numerics::{integrate_weighted_left, EvalReport, QuadratureSpec};
use crate::specfun::{gamma, rgamma};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const SNAP: f64 = 1e-12;

/// f(t) = e^{−β(t−a)} Σⱼ cⱼ (t−a)^{γⱼ−1}.
///
/// Tempered integrals and derivatives act on this family term by term:
/// I^{(ν,β)} sends γ to γ+ν with factor Γ(γ)/Γ(γ+ν), D^{(ν,β)} sends γ to
/// γ−ν with factor Γ(γ)/Γ(γ−ν). That makes limits at a⁺ exact.
#[derive(Debug, Clone, PartialEq)]
pub struct EabSeries {
    pub a: f64,
    pub beta: Complex64,
    /// (cⱼ, γⱼ) pairs.
    pub terms: Vec<(Complex64, Complex64)>,
}

fn snap(z: Complex64) -> Complex64 {
    let r = z.re.round();
    if z.im.abs() < SNAP && (z.re - r).abs() < SNAP {
        Complex64::new(r, 0.0)
    } else {
        z
    }
}

impl EabSeries {
    pub fn new(a: f64, beta: Complex64, terms: Vec<(Complex64, Complex64)>) -> Self {
        let terms = terms.into_iter().filter(|(c, _)| *c != ZERO).map(|(c, g)| (c, snap(g))).collect();
        EabSeries { a, beta, terms }
    }

    /// f(t) = e^{ρ(t−a)}·P(t−a) with P given by its coefficients. The
    /// exponential is expanded until its terms drop below 1e−18 on
    /// t − a ≤ `horizon`.
    pub fn exp_poly(a: f64, beta: Complex64, rho: Complex64, poly: &[Complex64], horizon: f64) -> Self {
        // e^{β(t−a)} f(t) = e^{(ρ+β)(t−a)} P(t−a)
        let k = rho + beta;
        let x = k.norm() * horizon.max(0.0);
        let mut exp_coef = vec![Complex64::new(1.0, 0.0)];
        if k != ZERO {
            let mut mag = 1.0;
            let mut j = 1;
            while j < 400 && (j as f64 <= x || mag > 1e-18) {
                let prev = exp_coef[j - 1];
                exp_coef.push(prev * k / j as f64);
                mag *= x / j as f64;
                j += 1;
            }
        }
        let mut coef = vec![ZERO; exp_coef.len() + poly.len()];
        for (i, e) in exp_coef.iter().enumerate() {
            for (j, p) in poly.iter().enumerate() {
                coef[i + j] += e * p;
            }
        }
        let terms = coef.into_iter().enumerate().map(|(j, c)| (c, Complex64::new(j as f64 + 1.0, 0.0))).collect();
        Self::new(a, beta, terms)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let x = t - self.a;
        if x < 0.0 {
            return Complex64::new(f64::NAN, 0.0);
        }
        (-self.beta * x).exp() * self.power_sum(x, 0.0)
    }

    /// Σ cⱼ x^{γⱼ−1−shift}.
    fn power_sum(&self, x: f64, shift: f64) -> Complex64 {
        let lx = x.ln();
        self.terms
            .iter()
            .map(|(c, g)| {
                let e = g - 1.0 - shift;
                if e == ZERO {
                    *c
                } else if x == 0.0 {
                    if e.re > 0.0 { ZERO } else { Complex64::new(f64::INFINITY, 0.0) }
                } else {
                    c * (e * lx).exp()
                }
            })
            .sum()
    }

    fn min_gamma_re(&self) -> f64 {
        self.terms.iter().map(|(_, g)| g.re).fold(f64::INFINITY, f64::min)
    }

    /// Smooth when every exponent is a positive integer.
    pub fn regularity(&self) -> Regularity {
        let smooth = self.terms.iter().all(|(_, g)| g.im == 0.0 && g.re >= 1.0 && g.re == g.re.round());
        if smooth {
            Regularity::Smooth
        } else {
            Regularity::Integrable
        }
    }

    pub fn handle(&self, b: f64) -> Result<FunctionHandle> {
        let s = self.clone();
        Ok(FunctionHandle::new(Interval::new(self.a, b)?, self.regularity(), move |t| s.eval(t)))
    }

    fn require_locally_integrable(&self) -> Result<()> {
        if let Some((_, g)) = self.terms.iter().find(|(_, g)| !(g.re > 0.0)) {
            return Err(Error::Regularity(format!("term (t−a)^{{{}}} is not integrable at a", g - 1.0)));
        }
        Ok(())
    }

    /// I^{(ν,β)} applied term by term.
    pub fn integral(&self, nu: Complex64) -> Result<EabSeries> {
        if !(nu.re > 0.0) {
            return Err(Error::domain(format!("fractional integral requires Re(α) > 0 (got α = {nu})")));
        }
        self.require_locally_integrable()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (c, g) in &self.terms {
            terms.push((c * gamma(*g)? * rgamma(g + nu), g + nu));
        }
        Ok(Self::new(self.a, self.beta, terms))
    }

    /// D^{(ν,β)} applied term by term; terms hitting a pole of 1/Γ vanish.
    pub fn derivative(&self, nu: Complex64) -> Result<EabSeries> {
        self.require_locally_integrable()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (c, g) in &self.terms {
            let shifted = snap(g - nu);
            terms.push((c * gamma(*g)? * rgamma(shifted), shifted));
        }
        Ok(Self::new(self.a, self.beta, terms))
    }

    /// lim_{t→a⁺} f(t); an error if some term blows up.
    pub fn limit_at_a(&self) -> Result<Complex64> {
        let mut v = ZERO;
        for (c, g) in &self.terms {
            if *g == Complex64::new(1.0, 0.0) {
                v += c;
            } else if !(g.re > 1.0) {
                return Err(Error::Regularity(format!("limit at a⁺ diverges: term (t−a)^{{{}}}", g - 1.0)));
            }
        }
        Ok(v)
    }

    /// I^{(ν,β)} f(t) by quadrature: graded rules at both ends of [a, t].
    pub fn integral_numeric(&self, nu: Complex64, t: f64, spec: &QuadratureSpec) -> Result<EvalReport> {
        if !(nu.re > 0.0) {
            return Err(Error::domain(format!("fractional integral requires Re(α) > 0 (got α = {nu})")));
        }
        self.require_locally_integrable()?;
        let len = t - self.a;
        if !(len > 0.0) {
            return Err(Error::domain(format!("need t > a (got a = {}, t = {t})", self.a)));
        }
        if self.terms.is_empty() {
            return Ok(EvalReport::exact(ZERO));
        }
        let half = 0.5 * len;
        let beta = self.beta;
        let phase = Complex64::new(0.0, nu.im);
        let near_t = integrate_weighted_left(|s: f64| (phase * s.ln() - beta * s).exp() * self.eval(t - s), half, nu.re - 1.0, spec)?;
        let sigma = (self.min_gamma_re() - 1.0).min(0.0);
        let nm1 = nu - 1.0;
        let near_a = integrate_weighted_left(
            |w: f64| {
                let s = len - w;
                (nm1 * s.ln() - beta * s - beta * w).exp() * self.power_sum(w, sigma)
            },
            half,
            sigma,
            spec,
        )?;
        Ok(near_t.combine(near_a).scaled(rgamma(nu)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{tempered_derivative, tempered_integral, FracParams};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn exp_poly_reproduces_function() {
        let s = EabSeries::exp_poly(0.3, c(0.7), c(1.0), &[c(2.0), c(-1.0)], 2.0);
        for t in [0.3, 0.9, 2.3] {
            let want = (t - 0.3f64).exp() * (2.0 - (t - 0.3));
            assert!((s.eval(t) - c(want)).norm() < 1e-14 * want.abs().max(1.0), "{t}");
        }
    }

    #[test]
    fn term_maps_match_quadrature() {
        let q = QuadratureSpec::default();
        let p = FracParams::real(0.6, 0.8).unwrap();
        let f = EabSeries::exp_poly(0.0, p.beta, c(0.5), &[c(1.0), c(0.5)], 1.5);
        let h = f.handle(1.5).unwrap();
        for t in [0.4, 1.1] {
            let i_chain = f.integral(p.alpha).unwrap().eval(t);
            let i_quad = tempered_integral(&h, &p, 0.0, t, &q).unwrap().value;
            assert!((i_chain - i_quad).norm() < 1e-9, "{i_chain} {i_quad}");
            let d_chain = f.derivative(p.alpha).unwrap().eval(t);
            let d_quad = tempered_derivative(&h, &p, 0.0, t, &q).unwrap().value;
            assert!((d_chain - d_quad).norm() < 1e-6 * d_chain.norm(), "{d_chain} {d_quad}");
        }
    }

    #[test]
    fn numeric_integral_handles_singular_terms() {
        let q = QuadratureSpec::default();
        let f = EabSeries::new(0.2, c(0.5), vec![(c(1.0), c(0.15)), (c(-0.3), c(1.7))]);
        let nu = c(0.9);
        let exact = f.integral(nu).unwrap().eval(1.4);
        let num = f.integral_numeric(nu, 1.4, &q).unwrap().value;
        assert!((exact - num).norm() < 1e-9 * exact.norm(), "{exact} {num}");
    }

    #[test]
    fn limits() {
        let f = EabSeries::new(0.0, c(1.0), vec![(c(2.0), c(1.0)), (c(1.0), c(1.5))]);
        assert_eq!(f.limit_at_a().unwrap(), c(2.0));
        let g = EabSeries::new(0.0, c(1.0), vec![(c(1.0), c(0.5))]);
        assert!(matches!(g.limit_at_a(), Err(Error::Regularity(_))));
        // D^{1/2} of (t−a)^{−1/2} vanishes
        let d = g.derivative(c(0.5)).unwrap();
        assert!(d.terms.is_empty());
    }
}
