//! Mellin transforms f̂(s) = ∫₀^∞ t^{s−1} f(t) dt, and two closed routes for
//! the transform of a tempered integral:
//!
//! ```text
//! (Kobayashi)  β^{1−α−s}/Γ(α) ∫₀^∞ Γ_{1−s}(α, βu) f(u) du
//! (series)     β^{1−α−s} ∫₀^∞ f(u) e^{βu} Σₙ Γ(α+s−n−1, βu)/Γ(α−n) · (−βu)ⁿ/n! du
//! ```
//!
//! In the second form the e^{βu} factor is absorbed into the scaled
//! incomplete gamma e^{x}Γ(a, x), so nothing grows exponentially. The
//! n-series converges only like n^{−α}; it is summed to N = N₀·2^j terms (N₀ ≥ 16, growing with βu) and
//! extrapolated in N with the known exponents α, α+1, ….

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::numerics::{integrate_semi_infinite, integrate_weighted_left, EvalReport, QuadratureSpec};
use crate::operators::FracParams;
use crate::specfun::{kobayashi_gamma_with, rgamma, upper_incomplete_gamma_reduced, upper_incomplete_gamma_scaled, SeriesSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A point of the Mellin variable s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinPoint {
    pub s: Complex64,
}

impl MellinPoint {
    pub fn new(s: Complex64) -> Self {
        MellinPoint { s }
    }

    pub fn real(s: f64) -> Self {
        MellinPoint { s: Complex64::new(s, 0.0) }
    }
}

/// ∫₀^∞ t^{s−1} g(t) dt: graded rule on [0, 1], semi-infinite rule beyond.
pub fn mellin_numeric(g: &FunctionHandle, s: MellinPoint, decay_hint: f64, spec: &QuadratureSpec) -> Result<EvalReport> {
    let s = s.s;
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("Mellin transform needs Re(s) > 0 (got s = {s})")));
    }
    let d = g.domain();
    if d.a > 0.0 || d.b.is_finite() {
        return Err(Error::domain("Mellin transform needs g defined on [0, ∞)"));
    }
    let phase = Complex64::new(0.0, s.im);
    let head = integrate_weighted_left(|t: f64| (phase * t.ln()).exp() * g.eval(t), 1.0, s.re - 1.0, spec)?;
    let sm1 = s - 1.0;
    let tail = integrate_semi_infinite(
        |w: f64| {
            let t = 1.0 + w;
            (sm1 * t.ln()).exp() * g.eval(t)
        },
        decay_hint,
        spec,
    )?;
    Ok(head.combine(tail))
}

fn check_strip(f: &FunctionHandle, p: &FracParams, s: Complex64, decay_hint: f64) -> Result<()> {
    if !(p.alpha.re > 0.0) {
        return Err(Error::domain(format!("Mellin route requires Re(α) > 0 (got α = {})", p.alpha)));
    }
    if !(p.beta.re > 0.0) {
        return Err(Error::domain(format!("Mellin route requires Re(β) > 0 (got β = {})", p.beta)));
    }
    if !(s.re >= 1.0 && (p.alpha + s - 1.0).re > 0.0) {
        return Err(Error::domain(format!("s = {s} is outside the strip Re(s) ≥ 1, Re(α+s−1) > 0")));
    }
    if !(decay_hint > 0.0) {
        return Err(Error::domain(format!("decay_hint must be positive (got {decay_hint})")));
    }
    let d = f.domain();
    if d.a > 0.0 || d.b.is_finite() {
        return Err(Error::domain("Mellin route needs f defined on [0, ∞)"));
    }
    Ok(())
}

/// Kobayashi-gamma route for the Mellin transform of I^{(α,β)} f.
pub fn mellin_tempered_kobayashi(
    f: &FunctionHandle,
    p: &FracParams,
    s: MellinPoint,
    decay_hint: f64,
    spec: &QuadratureSpec,
) -> Result<EvalReport> {
    let s = s.s;
    check_strip(f, p, s, decay_hint)?;
    let m = 1.0 - s;
    let failure = std::cell::RefCell::new(None);
    let r = integrate_semi_infinite(
        |u: f64| match kobayashi_gamma_with(m, p.alpha, p.beta * u, spec) {
            Ok(k) => k.value * f.eval(u),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, 0.0)
            }
        },
        decay_hint,
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let prefactor = ((1.0 - p.alpha - s) * p.beta.ln()).exp() * rgamma(p.alpha);
    Ok(r?.scaled(prefactor))
}

/// Σₙ (−x)ⁿ/(n! Γ(α−n)) · e^{x} Γ(c−n, x) with c = α+s−1, extrapolated
/// to n → ∞. Returns the value and an error estimate.
pub(crate) fn incgamma_series(alpha: Complex64, c: Complex64, x: f64) -> Result<(Complex64, f64)> {
    if x == 0.0 {
        // only n = 0 survives: Γ(c)/Γ(α)
        return Ok((crate::specfun::gamma(c)? * rgamma(alpha), 0.0));
    }
    let xc = Complex64::new(x, 0.0);
    let terminating = alpha.im == 0.0 && alpha.re == alpha.re.round();
    // the asymptotic regime in N starts once N ≫ x
    let n0 = (8.0 * x).max(N0 as f64).min(MAX_N0 as f64) as usize;
    let n0 = n0.next_power_of_two();
    let n_max = if terminating { alpha.re as usize } else { n0 << LEVELS };
    let direct_until = if x > 1.5 { x.ceil() as usize + 2 } else { 0 };
    let x_pow_c = (c * x.ln()).exp();
    let mut r = rgamma(alpha);
    // g = xⁿ e^{x} Γ(c−n, x)
    let mut g = upper_incomplete_gamma_scaled(c, xc)?;
    let mut partial = Vec::with_capacity(LEVELS + 1);
    let mut sum = ZERO;
    for n in 0..n_max {
        if n > 0 {
            let a = c - n as f64;
            r *= (n as f64 - alpha) / n as f64;
            g = if n <= direct_until || a == ZERO {
                x_pow_c * upper_incomplete_gamma_reduced(a, xc)?
            } else {
                (g * x - x_pow_c) / a
            };
        }
        sum += r * g;
        if !terminating && (n + 1) % n0 == 0 && ((n + 1) / n0).is_power_of_two() {
            partial.push(sum);
        }
    }
    if terminating {
        return Ok((sum, 0.0));
    }
    if !(sum.re.is_finite() && sum.im.is_finite()) {
        return Err(Error::NonFinite { at: x });
    }
    let best = richardson_known_exponents(&partial, alpha, LEVELS);
    let coarse = richardson_known_exponents(&partial[..LEVELS], alpha, LEVELS - 1);
    Ok((best, (best - coarse).norm()))
}

const N0: usize = 16;
const LEVELS: usize = 6;
const MAX_N0: usize = 1024;

/// Eliminates S_N = S + Σ_{j<J} e_j N^{−α−j} from partial sums at
/// N = N0·2^i, i = 0..=J.
fn richardson_known_exponents(partial: &[Complex64], alpha: Complex64, j_terms: usize) -> Complex64 {
    let rows = j_terms + 1;
    let mut m = vec![vec![ZERO; rows + 1]; rows];
    for (i, row) in m.iter_mut().enumerate() {
        row[0] = Complex64::new(1.0, 0.0);
        // (N/N0)^{−α−j} = 2^{−i(α+j)}
        for j in 0..j_terms {
            row[j + 1] = (-(alpha + j as f64) * (i as f64) * std::f64::consts::LN_2).exp();
        }
        row[rows] = partial[i];
    }
    solve_first(&mut m)
}

/// Gaussian elimination with partial pivoting; returns the first unknown.
fn solve_first(m: &mut [Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        m.swap(col, piv);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            let (upper, lower) = m.split_at_mut(row);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= factor * src;
            }
        }
    }
    let mut x = vec![ZERO; n];
    for i in (0..n).rev() {
        let mut acc = m[i][n];
        for k in i + 1..n {
            acc -= m[i][k] * x[k];
        }
        x[i] = acc / m[i][i];
    }
    x[0]
}

/// Incomplete-gamma series route for the Mellin transform of I^{(α,β)} f.
///
/// `sspec.tail_tol` bounds the accepted extrapolation error of the inner
/// series relative to its value (floored at 1e−9).
pub fn mellin_tempered_incgamma(
    f: &FunctionHandle,
    p: &FracParams,
    s: MellinPoint,
    decay_hint: f64,
    sspec: &SeriesSpec,
    qspec: &QuadratureSpec,
) -> Result<EvalReport> {
    let s = s.s;
    check_strip(f, p, s, decay_hint)?;
    sspec.validate()?;
    if p.beta.im != 0.0 {
        return Err(Error::domain("the incomplete-gamma route needs real β"));
    }
    let beta = p.beta.re;
    let c = p.alpha + s - 1.0;
    let inner_tol = sspec.tail_tol.max(1e-9);
    let failure = std::cell::RefCell::new(None);
    let series_err = std::cell::Cell::new(0.0f64);
    let r = integrate_semi_infinite(
        |u: f64| match incgamma_series(p.alpha, c, beta * u) {
            Ok((v, err)) => {
                if err > inner_tol * v.norm().max(1.0) {
                    failure.borrow_mut().get_or_insert(Error::non_convergent(
                        format!("incomplete-gamma n-series at βu = {}", beta * u),
                        EvalReport { value: v, err_estimate: err, effort: (N0 << LEVELS) as u64, converged: false },
                    ));
                }
                series_err.set(series_err.get().max(err / v.norm().max(1e-300)));
                v * f.eval(u)
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, 0.0)
            }
        },
        decay_hint,
        qspec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let mut r = r?;
    r.err_estimate += series_err.get() * r.value.norm();
    let prefactor = ((1.0 - p.alpha - s) * Complex64::new(beta.ln(), 0.0)).exp();
    Ok(r.scaled(prefactor))
}

/// One point of the three-route agreement corpus.
#[derive(Clone)]
pub struct MellinCase {
    pub name: &'static str,
    pub f: FunctionHandle,
    pub decay: f64,
    pub params: FracParams,
    pub s: MellinPoint,
}

/// {e^{−u}, u·e^{−u}, e^{−2u}} × α ∈ {0.5, 1, 1.5} × β ∈ {0.5, 1} × s ∈ {1, 1.5, 2}.
pub fn agreement_corpus() -> Vec<MellinCase> {
    use crate::function::{Interval, Regularity};
    let half = |f: fn(f64) -> f64| FunctionHandle::from_real(Interval::half_line(0.0), Regularity::Smooth, f);
    let fs: [(&'static str, FunctionHandle, f64); 3] = [
        ("exp(-u)", half(|u| (-u).exp()), 1.0),
        ("u*exp(-u)", half(|u| u * (-u).exp()), 1.0),
        ("exp(-2u)", half(|u| (-2.0 * u).exp()), 2.0),
    ];
    let mut out = Vec::with_capacity(54);
    for (name, f, decay) in &fs {
        for alpha in [0.5, 1.0, 1.5] {
            for beta in [0.5, 1.0] {
                for s in [1.0, 1.5, 2.0] {
                    out.push(MellinCase {
                        name,
                        f: f.clone(),
                        decay: *decay,
                        params: FracParams::real(alpha, beta).expect("valid corpus parameters"),
                        s: MellinPoint::real(s),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{Interval, Regularity};
    use crate::operators::tempered_integral_handle;
    use crate::specfun::{gamma, kobayashi_gamma};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn half_line<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> FunctionHandle {
        FunctionHandle::from_real(Interval::half_line(0.0), Regularity::Smooth, f)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn numeric_examples() {
        let q = QuadratureSpec::default();
        let e = half_line(|t| (-t).exp());
        assert!(rel(mellin_numeric(&e, MellinPoint::real(2.0), 1.0, &q).unwrap().value, c(1.0)) < 1e-10);
        let v = mellin_numeric(&e, MellinPoint::real(0.5), 1.0, &q).unwrap().value;
        assert!(rel(v, c(std::f64::consts::PI.sqrt())) < 1e-10);
        let g = half_line(|t| t * (-2.0 * t).exp());
        let v = mellin_numeric(&g, MellinPoint::real(1.5), 2.0, &q).unwrap().value;
        assert!(rel(v, c(0.234_996_400_744_370_7)) < 1e-10, "{v}");
    }

    #[test]
    fn scaling_law() {
        let q = QuadratureSpec::default();
        let s = MellinPoint::new(Complex64::new(1.3, 0.4));
        let base = mellin_numeric(&half_line(|t| (-t * t).exp() * (1.0 + t)), s, 1.0, &q).unwrap().value;
        for k in [0.5f64, 2.0] {
            let scaled = half_line(move |t| (-(k * t) * (k * t)).exp() * (1.0 + k * t));
            let v = mellin_numeric(&scaled, s, 1.0, &q).unwrap().value;
            let want = (-s.s * k.ln()).exp() * base;
            assert!(rel(v, want) < 1e-8);
        }
    }

    #[test]
    fn inner_series_matches_kobayashi() {
        for (alpha, s, x) in [(0.5, 1.5, 1.0), (1.5, 1.0, 0.5), (0.5, 1.0, 3.0), (1.5, 2.0, 4.0), (0.7, 1.3, 0.05)] {
            let (v, err) = incgamma_series(c(alpha), c(alpha + s - 1.0), x).unwrap();
            let k = kobayashi_gamma(c(1.0 - s), c(alpha), c(x)).unwrap() / gamma(c(alpha)).unwrap();
            assert!(rel(v, k) < 1e-9, "α={alpha} s={s} x={x}: {v} vs {k}");
            assert!(err < 1e-8 * v.norm());
        }
        let (v, _) = incgamma_series(Complex64::new(0.8, 0.3), Complex64::new(1.1, -0.2), 1.7).unwrap();
        let k = kobayashi_gamma(Complex64::new(-0.3, 0.5), Complex64::new(0.8, 0.3), c(1.7)).unwrap()
            / gamma(Complex64::new(0.8, 0.3)).unwrap();
        assert!(rel(v, k) < 1e-9, "{v} vs {k}");
    }

    #[test]
    fn kobayashi_route_at_s_one() {
        let q = QuadratureSpec::default();
        let f = half_line(|u| (-u).exp());
        let p = FracParams::real(0.7, 1.3).unwrap();
        let v = mellin_tempered_kobayashi(&f, &p, MellinPoint::real(1.0), 1.0, &q).unwrap().value;
        assert!(rel(v, c(1.3f64.powf(-0.7))) < 1e-9);
    }

    #[test]
    fn incgamma_route_integer_alpha() {
        let (s, q) = (SeriesSpec::default(), QuadratureSpec::default());
        let f = half_line(|u| (-2.0 * u).exp());
        let p = FracParams::real(1.0, 1.0).unwrap();
        let v = mellin_tempered_incgamma(&f, &p, MellinPoint::real(1.0), 2.0, &s, &q).unwrap().value;
        assert!(rel(v, c(0.5)) < 1e-10, "{v}");
    }

    #[test]
    fn three_routes_agree() {
        let (ss, q) = (SeriesSpec::default(), QuadratureSpec::default());
        let f = half_line(|u| (-u).exp());
        let p = FracParams::real(0.5, 1.0).unwrap();
        let s = MellinPoint::real(1.5);
        let k = mellin_tempered_kobayashi(&f, &p, s, 1.0, &q).unwrap().value;
        let g = mellin_tempered_incgamma(&f, &p, s, 1.0, &ss, &q).unwrap().value;
        let ih = tempered_integral_handle(&f, &p, 0.0, &q).unwrap();
        let n = mellin_numeric(&ih, s, 0.9, &q).unwrap().value;
        assert!(rel(k, g) < 1e-7, "{k} vs {g}");
        assert!(rel(k, n) < 1e-7, "{k} vs {n}");
    }

    #[test]
    fn strip_is_enforced() {
        let (ss, q) = (SeriesSpec::default(), QuadratureSpec::default());
        let f = half_line(|u| (-u).exp());
        let p = FracParams::real(0.5, 1.0).unwrap();
        assert!(mellin_tempered_kobayashi(&f, &p, MellinPoint::real(0.8), 1.0, &q).is_err());
        assert!(mellin_tempered_incgamma(&f, &p, MellinPoint::real(0.8), 1.0, &ss, &q).is_err());
        let p0 = FracParams::real(0.5, 0.0).unwrap();
        assert!(mellin_tempered_kobayashi(&f, &p0, MellinPoint::real(1.5), 1.0, &q).is_err());
    }
}
