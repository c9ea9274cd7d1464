use num_complex::Complex64;

use super::identities::unit_integral_closed;
use super::record::{input, TheoremId, VerificationRecord};
use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::numerics::QuadratureSpec;
use crate::operators::{tempered_integral, FracParams};

const GRID: usize = 64;
const SLACK_TOL: f64 = 1e-8;

fn real_value(f: &FunctionHandle, u: f64, name: &str) -> Result<f64> {
    let v = f.try_eval(u)?;
    if v.im != 0.0 {
        return Err(Error::domain(format!("{name} must be real-valued (got {v} at {u})")));
    }
    Ok(v.re)
}

fn in_domain(f: &FunctionHandle, u: f64) -> Result<()> {
    if !f.domain().contains(u) {
        return Err(Error::domain(format!("grid point {u} lies outside [{}, {}]", f.domain().a, f.domain().b)));
    }
    Ok(())
}

/// True iff (f(u)−f(v))(g(u)−g(v)) ≥ 0 for every pair of grid points.
pub fn synchrony_check(f: &FunctionHandle, g: &FunctionHandle, grid: &[f64]) -> Result<bool> {
    let mut fv = Vec::with_capacity(grid.len());
    let mut gv = Vec::with_capacity(grid.len());
    for &u in grid {
        in_domain(f, u)?;
        in_domain(g, u)?;
        fv.push(real_value(f, u, "f")?);
        gv.push(real_value(g, u, "g")?);
    }
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            if (fv[i] - fv[j]) * (gv[i] - gv[j]) < 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn grid(t: f64) -> Vec<f64> {
    (0..GRID).map(|k| t * k as f64 / (GRID - 1) as f64).collect()
}

fn require_synchronous(f: &FunctionHandle, g: &FunctionHandle, t: f64) -> Result<()> {
    if !synchrony_check(f, g, &grid(t))? {
        return Err(Error::Synchrony(format!("on a {GRID}-point grid over [0, {t}]")));
    }
    Ok(())
}

fn real_params(alpha: Complex64, beta: Complex64, t: f64) -> Result<FracParams> {
    if !(alpha.im == 0.0 && alpha.re > 0.0) {
        return Err(Error::domain(format!("inequalities need real α > 0 (got {alpha})")));
    }
    if !(beta.im == 0.0 && beta.re > 0.0) {
        return Err(Error::domain(format!("inequalities need real β > 0 (got {beta})")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("need t > 0 (got {t})")));
    }
    FracParams::new(alpha, beta)
}

fn tight(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec { rel_tol: spec.rel_tol.min(1e-12), abs_tol: spec.abs_tol.min(2.5e-14), ..*spec }
}

fn integral(f: &FunctionHandle, p: &FracParams, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(tempered_integral(f, p, 0.0, t, spec)?.value.re)
}

fn record(id: TheoremId, inputs: Vec<(String, Complex64)>, lhs: f64, rhs: f64) -> VerificationRecord {
    let scale = lhs.abs().max(rhs.abs());
    VerificationRecord::inequality(id, inputs, lhs, rhs, SLACK_TOL * scale)
}

/// I[fg] ≥ [β^αΓ(α)/γ(α,βt)]·I[f]·I[g] with I = I^{(α,β)} from 0.
pub fn chebyshev_slack1(f: &FunctionHandle, g: &FunctionHandle, p: &FracParams, t: f64, spec: &QuadratureSpec) -> Result<VerificationRecord> {
    let p = real_params(p.alpha, p.beta, t)?;
    require_synchronous(f, g, t)?;
    let q = tight(spec);
    let unit = unit_integral_closed(&p, t)?.re;
    let lhs = integral(&f.product(g)?, &p, t, &q)?;
    let rhs = integral(f, &p, t, &q)? * integral(g, &p, t, &q)? / unit;
    let inputs = vec![input("alpha", p.alpha), input("beta", p.beta), input("t", t)];
    Ok(record(TheoremId::Ineq1, inputs, lhs, rhs))
}

/// U₂·I₁[fg] + U₁·I₂[fg] ≥ I₁[f]I₂[g] + I₁[g]I₂[f], with Uᵢ = I^{(αᵢ,β)}[1].
pub fn chebyshev_slack2(
    f: &FunctionHandle,
    g: &FunctionHandle,
    alpha1: Complex64,
    alpha2: Complex64,
    beta: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<VerificationRecord> {
    let beta = Complex64::new(beta, 0.0);
    let p1 = real_params(alpha1, beta, t)?;
    let p2 = real_params(alpha2, beta, t)?;
    require_synchronous(f, g, t)?;
    let q = tight(spec);
    let fg = f.product(g)?;
    let u1 = unit_integral_closed(&p1, t)?.re;
    let u2 = unit_integral_closed(&p2, t)?.re;
    let lhs = u2 * integral(&fg, &p1, t, &q)? + u1 * integral(&fg, &p2, t, &q)?;
    let rhs = integral(f, &p1, t, &q)? * integral(g, &p2, t, &q)? + integral(g, &p1, t, &q)? * integral(f, &p2, t, &q)?;
    let inputs = vec![input("alpha1", alpha1), input("alpha2", alpha2), input("beta", beta), input("t", t)];
    Ok(record(TheoremId::Ineq2, inputs, lhs, rhs))
}

/// I[∏fᵢ] ≥ [β^αΓ(α)/γ(α,βt)]^{n−1}·∏I[fᵢ] for non-negative increasing fᵢ.
pub fn product_slack_n(fs: &[FunctionHandle], p: &FracParams, t: f64, spec: &QuadratureSpec) -> Result<VerificationRecord> {
    let p = real_params(p.alpha, p.beta, t)?;
    let first = fs.first().ok_or_else(|| Error::domain("need at least one function"))?;
    let pts = grid(t);
    for (i, f) in fs.iter().enumerate() {
        let mut prev = f64::NEG_INFINITY;
        for &u in &pts {
            in_domain(f, u)?;
            let v = real_value(f, u, "f")?;
            if !(v >= 0.0) {
                return Err(Error::Positivity(format!("f{} = {v} at {u}", i + 1)));
            }
            if v < prev {
                return Err(Error::Monotonicity(format!("f{} decreases before {u}", i + 1)));
            }
            prev = v;
        }
    }
    let q = tight(spec);
    let mut product = first.clone();
    let mut rhs = integral(first, &p, t, &q)?;
    let unit = unit_integral_closed(&p, t)?.re;
    for f in &fs[1..] {
        product = product.product(f)?;
        rhs *= integral(f, &p, t, &q)? / unit;
    }
    let lhs = if fs.len() == 1 { rhs } else { integral(&product, &p, t, &q)? };
    let inputs = vec![input("alpha", p.alpha), input("beta", p.beta), input("t", t), input("n", fs.len() as f64)];
    Ok(record(TheoremId::Ineq3, inputs, lhs, rhs))
}
