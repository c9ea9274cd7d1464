use num_complex::Complex64;

use super::eab::EabSeries;
use super::record::{input, SignConvention, TheoremId, VerificationRecord};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::operators::{tempered_derivative_handle, tempered_integral, FracParams};
use crate::specfun::{gamma, lower_incomplete_gamma, rgamma};

const MAX_DEPTH: usize = 2;

/// I^{(α,β)}[1](t) = γ(α, βt)/(β^α Γ(α)), with the β = 0 limit t^α/Γ(α+1).
pub fn unit_integral_closed(p: &FracParams, t: f64) -> Result<Complex64> {
    if !(p.alpha.re > 0.0) {
        return Err(Error::domain(format!("fractional integral requires Re(α) > 0 (got α = {})", p.alpha)));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("need t > 0 (got {t})")));
    }
    if p.beta == Complex64::new(0.0, 0.0) {
        return Ok((p.alpha * t.ln()).exp() * rgamma(p.alpha + 1.0));
    }
    let lower = lower_incomplete_gamma(p.alpha, p.beta * t)?;
    Ok(lower * (-p.alpha * p.beta.ln()).exp() * rgamma(p.alpha))
}

/// I^{(α,β)}[e^{−βu}(u−a)^{γ−1}](t) = Γ(γ)/Γ(γ+α)·e^{−βt}(t−a)^{α+γ−1}.
pub fn eab_power_integral(gamma_exp: Complex64, p: &FracParams, a: f64, t: f64) -> Result<Complex64> {
    if !(gamma_exp.re > 0.0) || !(p.alpha.re > 0.0) {
        return Err(Error::domain("need Re(γ) > 0 and Re(α) > 0"));
    }
    if !(t > a) {
        return Err(Error::domain(format!("need t > a (got a = {a}, t = {t})")));
    }
    let power = ((p.alpha + gamma_exp - 1.0) * (t - a).ln()).exp();
    Ok(gamma(gamma_exp)? * rgamma(gamma_exp + p.alpha) * (-p.beta * t).exp() * power)
}

/// γ((m+1)α, β(t−a)) / (β^{(m+1)α} Γ((m+1)α)).
pub fn remainder_prefactor(p: &FracParams, m: usize, a: f64, t: f64) -> Result<Complex64> {
    let q = FracParams { alpha: p.alpha * (m as f64 + 1.0), beta: p.beta };
    unit_integral_closed(&q, t - a)
}

fn require_unit_order(p: &FracParams) -> Result<()> {
    if !(p.alpha.im == 0.0 && p.alpha.re > 0.0 && p.alpha.re < 1.0) {
        return Err(Error::domain(format!("this check needs real α in (0, 1) (got {})", p.alpha)));
    }
    Ok(())
}

fn require_depth(depth: usize) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::CostExceeded { needed: depth as u64, budget: MAX_DEPTH as u64 });
    }
    Ok(())
}

/// Quadrature settings for the checks: at least as tight as 1e−12.
fn tight(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: spec.rel_tol.min(1e-12),
        abs_tol: spec.abs_tol.min(2.5e-14),
        max_panels: spec.max_panels.max(4096),
        ..*spec
    }
}

/// e^{−β(t−a)}(t−a)^{rα+α−1}/Γ(rα+α) · I^{(1−α,β)}(D^{(α,β)})^r f(a⁺).
fn boundary_term(dr: &EabSeries, p: &FracParams, r: usize, t: f64) -> Result<Complex64> {
    let limit = dr.integral(1.0 - p.alpha)?.limit_at_a()?;
    let k = p.alpha * (r as f64 + 1.0);
    let x = t - dr.a;
    Ok((-p.beta * x).exp() * ((k - 1.0) * x.ln()).exp() * rgamma(k) * limit)
}

/// Decides the sign of the boundary correction: `lhs` is compared with
/// +`correction` (PropSign) and −`correction` (LemmaSign).
fn signed_record(id: TheoremId, inputs: Vec<(String, Complex64)>, lhs: Complex64, correction: Complex64, scale: f64, tol: f64) -> VerificationRecord {
    let scale = scale.max(1e-300);
    let plus = (lhs - correction).norm() / scale;
    let minus = (lhs + correction).norm() / scale;
    let (rhs, residual, sign) = match (plus <= tol, minus <= tol) {
        (true, true) => (correction, plus, SignConvention::Undetermined),
        (true, false) => (correction, plus, SignConvention::PropSign),
        (false, true) => (-correction, minus, SignConvention::LemmaSign),
        (false, false) if plus <= minus => (correction, plus, SignConvention::Undetermined),
        (false, false) => (-correction, minus, SignConvention::Undetermined),
    };
    let mut rec = VerificationRecord::identity(id, inputs, lhs, rhs, residual, tol);
    rec.sign_convention = sign;
    rec
}

fn base_inputs(p: &FracParams, a: f64, t: f64) -> Vec<(String, Complex64)> {
    vec![input("alpha", p.alpha), input("beta", p.beta), input("a", a), input("t", t)]
}

/// f − I^{(α,β)} D^{(α,β)} f at t, with D f by numerical differentiation of
/// the quadrature integral and the outer integral by quadrature, against the
/// boundary term with k = 1.
pub fn inversion_check(f: &EabSeries, p: &FracParams, t: f64, spec: &QuadratureSpec) -> Result<VerificationRecord> {
    require_unit_order(p)?;
    if f.beta != p.beta {
        return Err(Error::domain("f must be expanded with the operator's β"));
    }
    let a = f.a;
    // the integrand carries finite-difference noise; 1e−8 is plenty for a 1e−4 check
    let q = QuadratureSpec { rel_tol: spec.rel_tol.max(1e-8), abs_tol: spec.abs_tol.max(1e-10), ..*spec };
    let h = f.handle(t)?;
    let df = tempered_derivative_handle(&h, p, a, spec)?;
    let idf = tempered_integral(&df, p, a, t, &q)?.value;
    if !(idf.re.is_finite() && idf.im.is_finite()) {
        return Err(Error::NonFinite { at: t });
    }
    let ft = f.eval(t);
    let lhs = ft - idf;
    let correction = boundary_term(f, p, 0, t)?;
    let scale = ft.norm().max(idf.norm()).max(correction.norm());
    Ok(signed_record(TheoremId::Inversion, base_inputs(p, a, t), lhs, correction, scale, 1e-4))
}

/// (I)^r(D)^r f − (I)^{r+1}(D)^{r+1} f at t. Powers of I are collapsed by
/// the semigroup law; D^r f is exact on the series, the integrals are
/// quadratures.
pub fn lemma_composition_check(f: &EabSeries, p: &FracParams, r: usize, t: f64, spec: &QuadratureSpec) -> Result<VerificationRecord> {
    require_unit_order(p)?;
    require_depth(r)?;
    if f.beta != p.beta {
        return Err(Error::domain("f must be expanded with the operator's β"));
    }
    let q = tight(spec);
    let dr = repeated_derivative(f, p, r)?;
    let dr1 = dr.derivative(p.alpha)?;
    let first = if r == 0 { f.eval(t) } else { dr.integral_numeric(p.alpha * r as f64, t, &q)?.value };
    let second = dr1.integral_numeric(p.alpha * (r as f64 + 1.0), t, &q)?.value;
    let lhs = first - second;
    let correction = boundary_term(&dr, p, r, t)?;
    let scale = first.norm().max(second.norm()).max(correction.norm());
    let mut inputs = base_inputs(p, f.a, t);
    inputs.push(input("r", r as f64));
    Ok(signed_record(TheoremId::LemmaComposition, inputs, lhs, correction, scale, 1e-4))
}

/// f(t) − I^{((m+1)α,β)}(D^{(α,β)})^{m+1} f(t) against the telescoped sum of
/// boundary terms r = 0..=m.
pub fn taylor_telescope_check(f: &EabSeries, p: &FracParams, m: usize, t: f64, spec: &QuadratureSpec) -> Result<VerificationRecord> {
    require_unit_order(p)?;
    require_depth(m)?;
    if f.beta != p.beta {
        return Err(Error::domain("f must be expanded with the operator's β"));
    }
    let q = tight(spec);
    let mut dr = f.clone();
    let mut correction = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for r in 0..=m {
        let term = boundary_term(&dr, p, r, t)?;
        scale = scale.max(term.norm());
        correction += term;
        dr = dr.derivative(p.alpha)?;
    }
    let remainder = dr.integral_numeric(p.alpha * (m as f64 + 1.0), t, &q)?.value;
    let ft = f.eval(t);
    let lhs = ft - remainder;
    let scale = scale.max(ft.norm()).max(remainder.norm());
    let tol = if m >= 2 { 1e-3 } else { 1e-4 };
    let mut inputs = base_inputs(p, f.a, t);
    inputs.push(input("m", m as f64));
    Ok(signed_record(TheoremId::TaylorTelescope, inputs, lhs, correction, scale, tol))
}

fn repeated_derivative(f: &EabSeries, p: &FracParams, r: usize) -> Result<EabSeries> {
    let mut d = f.clone();
    for _ in 0..r {
        d = d.derivative(p.alpha)?;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn unit_integral_examples() {
        let v = unit_integral_closed(&FracParams::real(1.0, 1.0).unwrap(), 1.0).unwrap();
        assert!((v.re - 0.632_120_558_828_557_7).abs() < 1e-14);
        let v = unit_integral_closed(&FracParams::real(0.5, 0.0).unwrap(), 1.0).unwrap();
        assert!((v.re - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);
        // erf(1)
        let v = unit_integral_closed(&FracParams::real(0.5, 1.0).unwrap(), 1.0).unwrap();
        assert!((v.re - 0.842_700_792_949_714_9).abs() < 1e-14);
    }

    #[test]
    fn eab_power_examples() {
        let p = FracParams::real(0.5, 1.0).unwrap();
        let v = eab_power_integral(c(1.0), &p, 0.0, 1.0).unwrap();
        assert!((v.re - 0.415_107_497_420_594_7).abs() < 1e-14, "{v}");
        let p0 = FracParams::real(0.7, 0.0).unwrap();
        let v = eab_power_integral(c(1.0), &p0, 0.0, 2.0).unwrap();
        assert!((v - 2f64.powf(0.7) * rgamma(c(1.7))).norm() < 1e-14);
    }

    #[test]
    fn remainder_prefactor_examples() {
        let p = FracParams::real(0.5, 1.0).unwrap();
        let v = remainder_prefactor(&p, 1, 0.0, 1.0).unwrap();
        assert!((v.re - 0.632_120_558_828_557_7).abs() < 1e-14);
        // mpmath: gammainc(1.8, 0, 0.4)/(0.8**1.8*gamma(1.8))
        let p = FracParams::real(0.6, 0.8).unwrap();
        let v = remainder_prefactor(&p, 2, 0.0, 0.5).unwrap();
        assert!((v.re - 0.133_106_808_521_216_37).abs() < 1e-13, "{v}");
    }

    #[test]
    fn inversion_examples() {
        let q = QuadratureSpec::default();
        let p = FracParams::real(0.5, 1.0).unwrap();
        // (t−a) e^{−β(t−a)}
        let f = EabSeries::new(0.0, p.beta, vec![(c(1.0), c(2.0))]);
        let rec = inversion_check(&f, &p, 0.8, &q).unwrap();
        assert!(rec.pass && rec.residual_or_slack < 1e-5, "{rec:?}");
        let one = EabSeries::exp_poly(0.0, p.beta, c(0.0), &[c(1.0)], 1.0);
        let rec = inversion_check(&one, &p, 1.0, &q).unwrap();
        assert!(rec.pass && rec.residual_or_slack < 1e-4, "{rec:?}");
        let p0 = FracParams::real(0.3, 0.0).unwrap();
        let sq = EabSeries::exp_poly(0.0, p0.beta, c(0.0), &[c(1.0), c(0.0), c(1.0)], 1.0);
        let rec = inversion_check(&sq, &p0, 0.9, &q).unwrap();
        assert!(rec.residual_or_slack < 1e-5, "{rec:?}");
    }

    #[test]
    fn lemma_examples_and_sign() {
        let q = QuadratureSpec::default();
        let p = FracParams::real(0.6, 0.5).unwrap();
        let f = EabSeries::new(0.0, p.beta, vec![(c(1.0), c(3.0))]);
        let rec = lemma_composition_check(&f, &p, 1, 0.8, &q).unwrap();
        assert!(rec.residual_or_slack < 1e-4, "{rec:?}");
        let p0 = FracParams::real(0.5, 0.0).unwrap();
        let sq = EabSeries::exp_poly(0.0, p0.beta, c(0.0), &[c(0.0), c(0.0), c(1.0)], 1.0);
        let rec = lemma_composition_check(&sq, &p0, 1, 0.7, &q).unwrap();
        assert!(rec.residual_or_slack < 1e-5, "{rec:?}");
        // α = 1/2, f(a) ≠ 0: a nonzero correction at r = 1
        let p = FracParams::real(0.5, 0.5).unwrap();
        let e = EabSeries::exp_poly(0.0, p.beta, c(1.0), &[c(1.0)], 1.0);
        let rec = lemma_composition_check(&e, &p, 1, 0.6, &q).unwrap();
        assert!(rec.pass, "{rec:?}");
        assert_eq!(rec.sign_convention, SignConvention::PropSign);
    }

    #[test]
    fn lemma_r0_matches_inversion() {
        let q = QuadratureSpec::default();
        let p = FracParams::real(0.4, 0.7).unwrap();
        let f = EabSeries::exp_poly(0.0, p.beta, c(0.3), &[c(1.0), c(2.0)], 1.0);
        let a = inversion_check(&f, &p, 0.9, &q).unwrap();
        let b = lemma_composition_check(&f, &p, 0, 0.9, &q).unwrap();
        assert!((a.lhs - b.lhs).norm() < 1e-6, "{a:?} {b:?}");
    }

    #[test]
    fn taylor_examples() {
        let q = QuadratureSpec::default();
        let p = FracParams::real(0.6, 0.8).unwrap();
        let f = EabSeries::new(0.0, p.beta, vec![(c(1.0), c(4.0))]);
        let rec = taylor_telescope_check(&f, &p, 1, 0.5, &q).unwrap();
        assert!(rec.residual_or_slack < 1e-4, "{rec:?}");
        let p = FracParams::real(0.5, 0.5).unwrap();
        let e = EabSeries::exp_poly(0.0, p.beta, c(1.0), &[c(1.0)], 0.4);
        let rec = taylor_telescope_check(&e, &p, 2, 0.4, &q).unwrap();
        assert!(rec.residual_or_slack < 1e-3, "{rec:?}");
        assert_eq!(rec.sign_convention, SignConvention::PropSign);
    }

    #[test]
    fn telescope_consistency() {
        let q = QuadratureSpec::default();
        let p = FracParams::real(0.5, 0.3).unwrap();
        let f = EabSeries::exp_poly(0.0, p.beta, c(0.4), &[c(1.0), c(1.0)], 0.9);
        let t0 = taylor_telescope_check(&f, &p, 0, 0.9, &q).unwrap();
        let t1 = taylor_telescope_check(&f, &p, 1, 0.9, &q).unwrap();
        let step = lemma_composition_check(&f, &p, 1, 0.9, &q).unwrap();
        // (lhs₁ − lhs₀) = I^{(α)}D f − I^{(2α)}D² f, (rhs₁ − rhs₀) = its correction
        assert!(((t1.lhs - t0.lhs) - step.lhs).norm() < 1e-8);
        assert!(((t1.rhs - t0.rhs) - step.rhs).norm() < 1e-8);
    }

    #[test]
    fn depth_is_bounded() {
        let q = QuadratureSpec::default();
        let p = FracParams::real(0.5, 0.5).unwrap();
        let f = EabSeries::new(0.0, p.beta, vec![(c(1.0), c(4.0))]);
        assert!(matches!(lemma_composition_check(&f, &p, 3, 0.5, &q), Err(Error::CostExceeded { .. })));
        let bad = FracParams::real(1.5, 0.5).unwrap();
        assert!(matches!(taylor_telescope_check(&f, &bad, 1, 0.5, &q), Err(Error::Domain(_))));
    }
}
