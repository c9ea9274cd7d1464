//! Browser bindings for a few tfc-core operations; see `www/index.html`.

use tfc_core::expr::{compile_str, parse};
use tfc_core::operators::{tempered_integral, FracParams};
use tfc_core::theorems::unit_integral_closed;
use tfc_core::{Error, Interval, QuadratureSpec, Regularity};
use wasm_bindgen::prelude::*;

fn message(e: &Error, expr: &str) -> String {
    match e {
        Error::Parse(p) => format!("{e}\n{}", p.pointer(expr)),
        _ => e.to_string(),
    }
}

/// `[re, im, err_estimate, effort]` of I^(α,β) f at t, with f given in t on [0, t].
pub fn integral_report(expr: &str, alpha: f64, beta: f64, t: f64) -> Result<[f64; 4], String> {
    let run = || {
        let f = compile_str(expr, Interval::new(0.0, t)?, Regularity::Integrable)?;
        let p = FracParams::real(alpha, beta)?;
        tempered_integral(&f, &p, 0.0, t, &QuadratureSpec::default())
    };
    let r = run().map_err(|e| message(&e, expr))?;
    Ok([r.value.re, r.value.im, r.err_estimate, r.effort as f64])
}

/// Canonical printed form of an expression.
pub fn canonical(expr: &str) -> Result<String, String> {
    parse(expr).map(|e| e.to_string()).map_err(|e| message(&Error::Parse(e), expr))
}

#[wasm_bindgen(js_name = temperedIntegral)]
pub fn tempered_integral_js(expr: &str, alpha: f64, beta: f64, t: f64) -> Result<Vec<f64>, JsError> {
    integral_report(expr, alpha, beta, t).map(Vec::from).map_err(|m| JsError::new(&m))
}

/// Closed form γ(α, βt)/(β^α Γ(α)) of the integral of f = 1.
#[wasm_bindgen(js_name = unitIntegral)]
pub fn unit_integral_js(alpha: f64, beta: f64, t: f64) -> Result<f64, JsError> {
    FracParams::real(alpha, beta)
        .and_then(|p| unit_integral_closed(&p, t))
        .map(|v| v.re)
        .map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = canonicalForm)]
pub fn canonical_js(expr: &str) -> Result<String, JsError> {
    canonical(expr).map_err(|m| JsError::new(&m))
}
