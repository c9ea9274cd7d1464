use num_complex::Complex64;

use super::{gauss_legendre, EvalReport, GaussRule};
use crate::error::{Error, Result};

/// Effort budget and tolerances for the adaptive quadrature engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel.
    pub nodes_per_panel: usize,
    /// Upper bound on the number of panels of one adaptive integral.
    pub max_panels: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Ratio between successive cutoffs on semi-infinite ranges.
    pub semi_infinite_cutoff_growth: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_panel: 32,
            max_panels: 1024,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            semi_infinite_cutoff_growth: 2.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureSpec { rel_tol, abs_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let floor = 100.0 * f64::EPSILON;
        if self.nodes_per_panel == 0 || self.max_panels == 0 {
            return Err(Error::domain("nodes_per_panel and max_panels must be positive"));
        }
        if !(self.rel_tol >= floor && self.abs_tol >= floor) {
            return Err(Error::domain(format!(
                "tolerances must be at least {floor:.1e} (got rel {:e}, abs {:e})",
                self.rel_tol, self.abs_tol
            )));
        }
        if !(self.semi_infinite_cutoff_growth > 1.0) {
            return Err(Error::domain("semi_infinite_cutoff_growth must exceed 1"));
        }
        Ok(())
    }

    pub(crate) fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    left: Complex64,
    right: Complex64,
    err: f64,
}

/// Applies the rule on [lo, hi]; returns the sum and the sum of |w f|.
fn rule_sum<F>(f: &F, lo: f64, hi: f64, rule: &GaussRule) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let t = mid + half * x;
        let v = f(t);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { at: t });
        }
        sum += v * *w;
        abs += w * v.norm();
    }
    Ok((sum * half, abs * half.abs()))
}

fn make_panel<F>(f: &F, lo: f64, hi: f64, whole: Complex64, rule: &GaussRule) -> Result<Panel>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let mid = 0.5 * (lo + hi);
    let (left, la) = rule_sum(f, lo, mid, rule)?;
    let (right, ra) = rule_sum(f, mid, hi, rule)?;
    let err = (whole - left - right).norm() + 50.0 * f64::EPSILON * (la + ra);
    Ok(Panel { lo, hi, left, right, err })
}

/// Globally adaptive Gauss–Legendre quadrature of `f` over [lo, hi].
///
/// Each panel carries two estimates: the rule on the whole panel and the
/// rule on its two halves. Their difference is the panel's error estimate.
/// The panel with the largest estimate is bisected until the total meets
/// `max(abs_tol, rel_tol·|value|)` or `max_panels` is reached. Panels
/// narrower than `min_width` are never split.
pub(crate) fn adaptive<F>(
    f: &F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
    min_width: f64,
) -> Result<EvalReport>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    if lo == hi {
        return Ok(EvalReport::exact(Complex64::new(0.0, 0.0)));
    }
    let rule = gauss_legendre(spec.nodes_per_panel);
    let per_rule = spec.nodes_per_panel as u64;
    let (whole, _) = rule_sum(f, lo, hi, &rule)?;
    let mut panels = vec![make_panel(f, lo, hi, whole, &rule)?];
    let mut effort = 3 * per_rule;
    loop {
        let value: Complex64 = panels.iter().map(|p| p.left + p.right).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let report = EvalReport { value, err_estimate: err, effort, converged: false };
        if err <= spec.target(value.norm()) {
            return Ok(EvalReport { converged: true, ..report });
        }
        if panels.len() >= spec.max_panels {
            return Err(Error::non_convergent("adaptive quadrature", report));
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| (p.hi - p.lo).abs() > min_width)
            .fold(None, |best: Option<(usize, f64)>, (i, p)| match best {
                Some((_, e)) if e >= p.err => best,
                _ => Some((i, p.err)),
            });
        let Some((idx, _)) = worst else {
            return Err(Error::non_convergent("adaptive quadrature (resolution limit)", report));
        };
        let p = panels.swap_remove(idx);
        let mid = 0.5 * (p.lo + p.hi);
        let a = make_panel(f, p.lo, mid, p.left, &rule)?;
        let b = make_panel(f, mid, p.hi, p.right, &rule)?;
        effort += 4 * per_rule;
        // keep panels ordered by position so summation order is reproducible
        let pos = panels.partition_point(|q| q.lo < p.lo);
        panels.insert(pos, b);
        panels.insert(pos, a);
    }
}

/// Adaptive integral of a smooth (or endpoint-singular) `f` over [lo, hi].
pub fn integrate_interval<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<EvalReport>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    adaptive(&f, lo, hi, spec, 0.0)
}

/// ∫₀ᵀ s^σ g(s) ds with the endpoint singularity removed by grading.
///
/// The substitution s = T·τ^p with p(1+σ) an integer turns the weight into
/// a polynomial in τ; what is left of the endpoint behaviour is resolved by
/// adaptive bisection toward τ = 0.
pub fn integrate_weighted_left<F>(
    g: F,
    length: f64,
    sigma: f64,
    spec: &QuadratureSpec,
) -> Result<EvalReport>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(sigma > -1.0) {
        return Err(Error::domain(format!("weight exponent must exceed -1 (got {sigma})")));
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::domain(format!("length must be positive and finite (got {length})")));
    }
    // p(1+σ) = m is an integer, so the Jacobian τ^{m−1} is a polynomial;
    // p ≥ 3 keeps g(T·τ^p) smooth enough at τ = 0
    let m = if sigma == 0.0 { 1.0 } else { (3.0 * (1.0 + sigma)).ceil() };
    let p = m / (1.0 + sigma);
    let jac_exp = m - 1.0;
    let scale = length.powf(1.0 + sigma) * p;
    let mapped = |tau: f64| {
        let s = length * tau.powf(p);
        if s == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let w = if jac_exp == 0.0 { 1.0 } else { tau.powf(jac_exp) };
        g(s) * (scale * w)
    };
    adaptive(&mapped, 0.0, 1.0, spec, 0.0)
}

/// ∫₀^∞ g(t) dt for integrands with |g(t)| ≲ C·e^{−decay_hint·t}.
///
/// Integrates successive segments [T_k, T_{k+1}] with T_{k+1} = growth·T_k
/// until the tail bound 2|g(T)|/decay_hint is below tolerance. The tail
/// bound is added to the returned error estimate.
pub fn integrate_semi_infinite<F>(g: F, decay_hint: f64, spec: &QuadratureSpec) -> Result<EvalReport>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(decay_hint > 0.0) || !decay_hint.is_finite() {
        return Err(Error::domain(format!("decay_hint must be positive (got {decay_hint})")));
    }
    let max_segments = spec.max_panels.min(64);
    let mut lo = 0.0;
    let mut hi = (1.0 / decay_hint).max(1.0);
    let mut total = EvalReport::exact(Complex64::new(0.0, 0.0));
    for k in 0..max_segments {
        let mut seg_spec = *spec;
        seg_spec.abs_tol = spec.abs_tol.max(0.25 * spec.rel_tol * total.value.norm());
        let seg = adaptive(&g, lo, hi, &seg_spec, 0.0)?;
        total = total.combine(seg);
        let edge = g(hi);
        total.effort += 1;
        if !(edge.re.is_finite() && edge.im.is_finite()) {
            return Err(Error::NonFinite { at: hi });
        }
        let tail = 2.0 * edge.norm() / decay_hint;
        let target = spec.target(total.value.norm());
        if k >= 1 && tail + total.err_estimate <= target {
            total.err_estimate += tail;
            total.converged = true;
            return Ok(total);
        }
        lo = hi;
        hi *= spec.semi_infinite_cutoff_growth;
    }
    Err(Error::non_convergent("semi-infinite quadrature", total))
}
