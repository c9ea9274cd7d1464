//! Verification suites. Identity suites run a fixed corpus; inequality
//! suites draw instances from a caller-supplied uniform generator, so a
//! seeded generator makes them reproducible.

use num_complex::Complex64;

use super::eab::EabSeries;
use super::identities::{inversion_check, lemma_composition_check, taylor_telescope_check};
use super::inequalities::{chebyshev_slack1, chebyshev_slack2, product_slack_n};
use super::record::{SignConvention, TheoremId, VerificationRecord};
use crate::error::{Error, Result};
use crate::function::{FunctionHandle, Interval, Regularity};
use crate::numerics::QuadratureSpec;
use crate::operators::FracParams;

/// An instance of an identity check: `order` is r for the lemma and m for
/// the telescoped Taylor identity.
#[derive(Debug, Clone)]
pub struct IdentityInstance {
    pub label: &'static str,
    pub f: EabSeries,
    pub p: FracParams,
    pub order: usize,
    pub t: f64,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn inst(label: &'static str, alpha: f64, beta: Complex64, order: usize, t: f64, f: impl Fn(Complex64) -> EabSeries) -> IdentityInstance {
    IdentityInstance { label, f: f(beta), p: FracParams::new(c(alpha), beta).expect("corpus parameters are valid"), order, t }
}

fn poly(a: f64, beta: Complex64, rho: f64, coeffs: &[f64], t: f64) -> EabSeries {
    let coeffs: Vec<Complex64> = coeffs.iter().map(|&x| c(x)).collect();
    EabSeries::exp_poly(a, beta, c(rho), &coeffs, t - a)
}

pub fn inversion_corpus() -> Vec<IdentityInstance> {
    vec![
        inst("(t-a)e^(-b(t-a))", 0.5, c(1.0), 0, 0.8, |b| EabSeries::new(0.0, b, vec![(c(1.0), c(2.0))])),
        inst("1", 0.5, c(1.0), 0, 1.0, |b| poly(0.0, b, 0.0, &[1.0], 1.0)),
        inst("t^2, RL", 0.3, c(0.0), 0, 0.9, |b| poly(0.0, b, 0.0, &[0.0, 0.0, 1.0], 0.9)),
        inst("e^(0.3t)(1+2t)", 0.4, c(0.7), 0, 0.9, |b| poly(0.0, b, 0.3, &[1.0, 2.0], 0.9)),
    ]
}

pub fn lemma_corpus() -> Vec<IdentityInstance> {
    vec![
        inst("e^(0.3t)(1+2t)", 0.4, c(0.7), 0, 0.9, |b| poly(0.0, b, 0.3, &[1.0, 2.0], 0.9)),
        inst("e^(-bt)t^2", 0.6, c(0.5), 1, 0.8, |b| EabSeries::new(0.0, b, vec![(c(1.0), c(3.0))])),
        inst("t^2, RL", 0.5, c(0.0), 1, 0.7, |b| poly(0.0, b, 0.0, &[0.0, 0.0, 1.0], 0.7)),
        inst("e^t", 0.5, c(0.5), 1, 0.6, |b| poly(0.0, b, 1.0, &[1.0], 0.6)),
        inst("1+t", 1.0 / 3.0, c(0.3), 2, 0.9, |b| poly(0.0, b, 0.0, &[1.0, 1.0], 0.9)),
        inst("t+t^2/2", 2.0 / 3.0, c(0.7), 2, 0.6, |b| poly(0.0, b, 0.0, &[0.0, 1.0, 0.5], 0.6)),
    ]
}

pub fn taylor_corpus() -> Vec<IdentityInstance> {
    vec![
        inst("e^t", 0.5, c(0.5), 2, 0.4, |b| poly(0.0, b, 1.0, &[1.0], 0.4)),
        inst("e^(-bt)t^3", 0.6, c(0.8), 1, 0.5, |b| EabSeries::new(0.0, b, vec![(c(1.0), c(4.0))])),
        inst("1", 0.5, c(1.0), 1, 0.7, |b| poly(0.0, b, 0.0, &[1.0], 0.7)),
        inst("1+t", 1.0 / 3.0, c(0.3), 2, 0.9, |b| poly(0.0, b, 0.0, &[1.0, 1.0], 0.9)),
        inst("t+t^2/2", 2.0 / 3.0, c(0.7), 2, 0.6, |b| poly(0.0, b, 0.0, &[0.0, 1.0, 0.5], 0.6)),
        inst("e^(0.3t)", 0.4, Complex64::new(0.2, 0.3), 0, 1.2, |b| poly(0.0, b, 0.3, &[1.0], 1.2)),
        inst("t^2 e^(-t)", 0.75, c(0.4), 1, 1.1, |b| poly(0.0, b, -1.0, &[0.0, 0.0, 1.0], 1.1)),
        inst("2+t", 0.45, c(1.2), 1, 1.0, |b| poly(0.0, b, 0.0, &[2.0, 1.0], 1.0)),
        inst("e^t, a=0.5", 0.5, c(0.25), 1, 1.3, |b| poly(0.5, b, 1.0, &[0.5f64.exp()], 1.3)),
        inst("t(1+t)", 0.8, c(0.6), 1, 0.9, |b| poly(0.0, b, 0.0, &[0.0, 1.0, 1.0], 0.9)),
    ]
}

/// Runs an identity suite (inversion, lemma or taylor) over its corpus,
/// optionally truncated to the first `limit` instances.
pub fn identity_suite(id: TheoremId, limit: Option<usize>, spec: &QuadratureSpec) -> Result<Vec<VerificationRecord>> {
    let corpus = match id {
        TheoremId::Inversion => inversion_corpus(),
        TheoremId::LemmaComposition => lemma_corpus(),
        TheoremId::TaylorTelescope => taylor_corpus(),
        other => return Err(Error::domain(format!("{} is not an identity suite", other.name()))),
    };
    let n = limit.unwrap_or(corpus.len()).min(corpus.len());
    corpus[..n]
        .iter()
        .map(|i| match id {
            TheoremId::Inversion => inversion_check(&i.f, &i.p, i.t, spec),
            TheoremId::LemmaComposition => lemma_composition_check(&i.f, &i.p, i.order, i.t, spec),
            _ => taylor_telescope_check(&i.f, &i.p, i.order, i.t, spec),
        })
        .collect()
}

/// The common sign of all instances that determine one; `None` when two
/// instances disagree.
pub fn consistent_sign(records: &[VerificationRecord]) -> Option<SignConvention> {
    let mut found = SignConvention::Undetermined;
    for r in records {
        match (found, r.sign_convention) {
            (_, SignConvention::Undetermined) => {}
            (SignConvention::Undetermined, s) => found = s,
            (f, s) if f != s => return None,
            _ => {}
        }
    }
    Some(found)
}

const HORIZON: f64 = 2.0;

fn span(u: &mut dyn FnMut() -> f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * u()
}

/// A positive increasing function on [0, 2] from a five-member family;
/// draws exactly three uniforms.
pub fn random_increasing(u: &mut dyn FnMut() -> f64) -> FunctionHandle {
    let kind = (u() * 5.0) as usize;
    let x = u();
    let y = u();
    let dom = Interval { a: 0.0, b: HORIZON };
    match kind {
        0 => {
            let (c0, p) = (x, 0.5 + 2.5 * y);
            FunctionHandle::from_real(dom, Regularity::Integrable, move |t| c0 + t.powf(p))
        }
        1 => {
            let k = 0.1 + 1.9 * x;
            FunctionHandle::from_real(dom, Regularity::Smooth, move |t| (k * t).exp())
        }
        2 => {
            let k = 0.5 + 2.5 * x;
            FunctionHandle::from_real(dom, Regularity::Smooth, move |t| 1.0 + (k * t).ln_1p())
        }
        3 => {
            let p = 0.5 + 2.5 * x;
            FunctionHandle::from_real(dom, Regularity::Smooth, move |t| (1.0 + t).powf(p))
        }
        _ => {
            let k = 0.2 + 2.8 * x;
            FunctionHandle::from_real(dom, Regularity::Smooth, move |t| 2.0 - (-k * t).exp())
        }
    }
}

/// A synchronous pair: both increasing, or (with probability ½) both
/// replaced by their reciprocals, which are decreasing. Draws seven uniforms.
pub fn random_synchronous_pair(u: &mut dyn FnMut() -> f64) -> (FunctionHandle, FunctionHandle) {
    let f = random_increasing(u);
    let g = random_increasing(u);
    if u() < 0.5 {
        (f, g)
    } else {
        let recip = |h: FunctionHandle| FunctionHandle::new(h.domain(), h.regularity(), move |t| 1.0 / h.eval(t));
        (recip(f), recip(g))
    }
}

/// `n` random instances of an inequality with α ∈ (0.3, 2), β ∈ (0.1, 2),
/// t ∈ (0.1, 2).
pub fn inequality_suite(id: TheoremId, n: usize, u: &mut dyn FnMut() -> f64, spec: &QuadratureSpec) -> Result<Vec<VerificationRecord>> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let alpha = span(u, 0.3, 2.0);
        let beta = span(u, 0.1, 2.0);
        let t = span(u, 0.1, HORIZON);
        let rec = match id {
            TheoremId::Ineq1 => {
                let (f, g) = random_synchronous_pair(u);
                chebyshev_slack1(&f, &g, &FracParams::real(alpha, beta)?, t, spec)?
            }
            TheoremId::Ineq2 => {
                let alpha2 = span(u, 0.3, 2.0);
                let (f, g) = random_synchronous_pair(u);
                chebyshev_slack2(&f, &g, c(alpha), c(alpha2), beta, t, spec)?
            }
            TheoremId::Ineq3 => {
                let k = 1 + (u() * 4.0) as usize;
                let fs: Vec<FunctionHandle> = (0..k).map(|_| random_increasing(u)).collect();
                product_slack_n(&fs, &FracParams::real(alpha, beta)?, t, spec)?
            }
            other => return Err(Error::domain(format!("{} is not an inequality suite", other.name()))),
        };
        out.push(rec);
    }
    Ok(out)
}
