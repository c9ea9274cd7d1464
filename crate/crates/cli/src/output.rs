use std::io::{self, Write};

use serde::Serialize;
use tfc_core::EvalReport;

use crate::args::Format;

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub trait Row: Serialize {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

#[derive(Serialize)]
pub struct EvalRow {
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub err: f64,
    pub effort: u64,
    pub converged: bool,
}

impl EvalRow {
    pub fn new(t: f64, r: &EvalReport) -> Self {
        EvalRow { t, re: r.value.re, im: r.value.im, err: r.err_estimate, effort: r.effort, converged: r.converged }
    }
}

impl Row for EvalRow {
    const HEADER: &'static str = "t,re,im,err,effort,converged";
    fn csv(&self) -> String {
        format!("{},{},{},{},{},{}", num(self.t), num(self.re), num(self.im), num(self.err), self.effort, self.converged)
    }
}

#[derive(Serialize)]
pub struct SeriesRow {
    pub t: f64,
    pub m: usize,
    pub re: f64,
    pub im: f64,
    pub term_abs: f64,
}

impl Row for SeriesRow {
    const HEADER: &'static str = "t,m,re,im,term_abs";
    fn csv(&self) -> String {
        format!("{},{},{},{},{}", num(self.t), self.m, num(self.re), num(self.im), num(self.term_abs))
    }
}

#[derive(Serialize)]
pub struct MellinRow {
    pub route: &'static str,
    pub re: f64,
    pub im: f64,
    pub err: f64,
    pub effort: u64,
    pub converged: bool,
}

impl Row for MellinRow {
    const HEADER: &'static str = "route,re,im,err,effort,converged";
    fn csv(&self) -> String {
        format!("{},{},{},{},{},{}", self.route, num(self.re), num(self.im), num(self.err), self.effort, self.converged)
    }
}

#[derive(Serialize)]
pub struct VerifyRow {
    pub theorem: &'static str,
    pub residual_or_slack: f64,
    pub pass: bool,
    pub sign_convention: &'static str,
}

impl Row for VerifyRow {
    const HEADER: &'static str = "theorem,residual_or_slack,pass,sign_convention";
    fn csv(&self) -> String {
        format!("{},{},{},{}", self.theorem, num(self.residual_or_slack), self.pass, self.sign_convention)
    }
}

/// Writes all rows at once; `summary` follows the CSV rows, or goes to
/// stderr for JSON so that stdout stays a single document.
pub fn emit<R: Row>(format: Format, rows: &[R], summary: Option<&str>) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Csv => {
            writeln!(out, "{}", R::HEADER)?;
            for r in rows {
                writeln!(out, "{}", r.csv())?;
            }
            if let Some(s) = summary {
                writeln!(out, "{s}")?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(io::Error::other)?;
            writeln!(out)?;
            if let Some(s) = summary {
                eprintln!("{s}");
            }
        }
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(1.25e-7), "1.25e-7");
        assert_eq!(num(-3e20), "-3e20");
        assert_eq!(num(f64::NAN), "NaN");
    }

    #[test]
    fn csv_row() {
        let r = EvalRow { t: 1.0, re: 0.25, im: 0.0, err: 1e-12, effort: 96, converged: true };
        assert_eq!(r.csv(), "1,0.25,0,1e-12,96,true");
        assert_eq!(EvalRow::HEADER.split(',').count(), r.csv().split(',').count());
    }
}
