use rand_core::{RngCore, SeedableRng};
use rand_pcg::Pcg64;
use tfc_core::expr::{compile_str, constant_value};
use tfc_core::mellin::{mellin_numeric, mellin_tempered_incgamma, mellin_tempered_kobayashi, MellinPoint};
use tfc_core::operators::{
    gpf_derivative, gpf_integral, rl_derivative, rl_integral, tempered_derivative, tempered_integral, tempered_integral_handle,
    FracParams, GpfParams,
};
use tfc_core::series::{series_derivative_trace, series_integral_trace};
use tfc_core::theorems::suites::{consistent_sign, identity_suite, inequality_suite};
use tfc_core::theorems::{SignConvention, TheoremId, VerificationRecord};
use tfc_core::{Complex64, Error, EvalReport, FunctionHandle, Interval, QuadratureSpec, Regularity, Result, SeriesSpec};

use crate::args::{Cli, Command, MellinArgs, OpArgs, RegularityArg, Route, SeriesArgs, Suite, TableArgs, TableOp, Tolerances, VerifyArgs};
use crate::output::{emit, EvalRow, MellinRow, SeriesRow, VerifyRow};

const EFFORT_VAR: &str = "TFC_MAX_EFFORT";

/// Running total of integrand evaluations against TFC_MAX_EFFORT.
struct Budget {
    cap: Option<u64>,
    used: u64,
}

impl Budget {
    fn from_env() -> Result<Self> {
        let cap = match std::env::var(EFFORT_VAR) {
            Ok(v) => Some(v.trim().parse::<u64>().map_err(|_| Error::Domain(format!("{EFFORT_VAR} must be a non-negative integer (got {v:?})")))?),
            Err(_) => None,
        };
        Ok(Budget { cap, used: 0 })
    }

    fn charge(&mut self, effort: u64) -> Result<()> {
        self.used += effort;
        match self.cap {
            Some(cap) if self.used > cap => Err(Error::CostExceeded { needed: self.used, budget: cap }),
            _ => Ok(()),
        }
    }

    fn spec(&self, tol: &Tolerances) -> Result<QuadratureSpec> {
        let mut q = QuadratureSpec::default();
        if let Some(r) = tol.rel_tol {
            q.rel_tol = r;
        }
        if let Some(a) = tol.abs_tol {
            q.abs_tol = a;
        }
        if let Some(cap) = self.cap {
            q.max_panels = q.max_panels.min((cap / q.nodes_per_panel as u64).max(1) as usize);
        }
        q.validate()?;
        Ok(q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Int,
    Der,
    GpfInt,
    GpfDer,
    RlInt,
    RlDer,
}

impl Op {
    fn is_integral(self) -> bool {
        matches!(self, Op::Int | Op::GpfInt | Op::RlInt)
    }
}

struct Operator {
    op: Op,
    p: FracParams,
    rho: f64,
}

impl Operator {
    fn new(op: Op, args: &OpArgs) -> Result<Self> {
        let alpha = constant_value(&args.alpha)?;
        if op.is_integral() && !(alpha.re > 0.0) {
            return Err(Error::Domain(format!("fractional integral requires Re(α) > 0 (got α = {alpha})")));
        }
        let beta = match op {
            Op::RlInt | Op::RlDer => Complex64::new(0.0, 0.0),
            _ => constant_value(&args.beta)?,
        };
        let rho = match (op, args.rho) {
            (Op::GpfInt | Op::GpfDer, None) => return Err(Error::Domain("GPF operators need --rho".into())),
            (Op::GpfInt | Op::GpfDer, Some(r)) => GpfParams::new(alpha, r)?.rho,
            _ => 1.0,
        };
        Ok(Operator { op, p: FracParams::new(alpha, beta)?, rho })
    }

    fn eval(&self, f: &FunctionHandle, a: f64, t: f64, q: &QuadratureSpec) -> Result<EvalReport> {
        let g = || GpfParams { alpha: self.p.alpha, rho: self.rho };
        let r = match self.op {
            Op::Int => tempered_integral(f, &self.p, a, t, q),
            Op::Der => tempered_derivative(f, &self.p, a, t, q),
            Op::GpfInt => gpf_integral(f, &g(), a, t, q),
            Op::GpfDer => gpf_derivative(f, &g(), a, t, q),
            Op::RlInt => rl_integral(f, self.p.alpha, a, t, q),
            Op::RlDer => rl_derivative(f, self.p.alpha, a, t, q),
        };
        match r {
            Err(Error::NonConvergent { partial, .. }) => Ok(EvalReport { converged: false, ..partial }),
            other => other,
        }
    }
}

fn regularity(r: RegularityArg) -> Regularity {
    match r {
        RegularityArg::Smooth => Regularity::Smooth,
        RegularityArg::Integrable => Regularity::Integrable,
    }
}

fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain(format!("--{name} must be finite")))
    }
}

/// Evaluation points in (a, b] and the right end of the domain of f.
fn grid(args: &OpArgs) -> Result<(Vec<f64>, f64)> {
    let a = finite("a", args.a)?;
    if args.grid_points == 0 {
        return Err(Error::Domain("--grid-points must be at least 1".into()));
    }
    if let Some(t) = args.t {
        let t = finite("t", t)?;
        let b = args.b.unwrap_or(if t > a { t } else { a + 1.0 });
        return Ok((vec![t], b));
    }
    let b = finite("b", args.b.ok_or_else(|| Error::Domain("either --t or --b is required".into()))?)?;
    if !(b > a) {
        return Err(Error::Domain(format!("need a < b (got a = {a}, b = {b})")));
    }
    let n = args.grid_points;
    Ok(((1..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect(), b))
}

fn integrand(args: &OpArgs, b: f64) -> Result<FunctionHandle> {
    compile_str(&args.expr, Interval::new(args.a, b)?, regularity(args.regularity))
}

fn eval_command(op: Op, args: &OpArgs, budget: &mut Budget) -> Result<Vec<EvalRow>> {
    let q = budget.spec(&args.tol)?;
    let opr = Operator::new(op, args)?;
    let (ts, b) = grid(args)?;
    let f = integrand(args, b)?;
    let mut rows = Vec::with_capacity(ts.len());
    for t in ts {
        let r = opr.eval(&f, args.a, t, &q)?;
        budget.charge(r.effort)?;
        rows.push(EvalRow::new(t, &r));
    }
    Ok(rows)
}

fn table_command(args: &TableArgs, budget: &mut Budget) -> Result<Vec<EvalRow>> {
    let o = &args.op;
    let q = budget.spec(&o.tol)?;
    let a = finite("a", o.a)?;
    let b = finite("b", o.b.ok_or_else(|| Error::Domain("table needs --b".into()))?)?;
    if !(b > a) {
        return Err(Error::Domain(format!("need a < b (got a = {a}, b = {b})")));
    }
    if o.grid_points == 0 {
        return Err(Error::Domain("--grid-points must be at least 1".into()));
    }
    let n = o.grid_points;
    let ts: Vec<f64> = if n == 1 { vec![b] } else { (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect() };
    let f = integrand(o, b)?;
    let op = match args.of {
        TableOp::F => None,
        TableOp::Int => Some(Op::Int),
        TableOp::Der => Some(Op::Der),
        TableOp::GpfInt => Some(Op::GpfInt),
        TableOp::GpfDer => Some(Op::GpfDer),
        TableOp::RlInt => Some(Op::RlInt),
        TableOp::RlDer => Some(Op::RlDer),
    };
    let opr = op.map(|op| Operator::new(op, o)).transpose()?;
    let mut rows = Vec::with_capacity(n);
    for t in ts {
        let r = match &opr {
            None => EvalReport::exact(f.try_eval(t)?),
            Some(opr) if t == a && opr.op.is_integral() => EvalReport::exact(Complex64::new(0.0, 0.0)),
            // derivatives are singular at a; sample just inside
            Some(opr) if t == a => opr.eval(&f, a, a + 1e-9 * (b - a), &q)?,
            Some(opr) => opr.eval(&f, a, t, &q)?,
        };
        budget.charge(r.effort)?;
        rows.push(EvalRow::new(t, &r));
    }
    Ok(rows)
}

fn series_command(args: &SeriesArgs, budget: &mut Budget) -> Result<Vec<SeriesRow>> {
    let o = &args.op;
    let q = budget.spec(&o.tol)?;
    let s = SeriesSpec::new(args.max_terms, args.tail_tol)?;
    let alpha = constant_value(&o.alpha)?;
    if !args.derivative && !(alpha.re > 0.0) {
        return Err(Error::Domain(format!("fractional integral requires Re(α) > 0 (got α = {alpha})")));
    }
    let p = FracParams::new(alpha, constant_value(&o.beta)?)?;
    let (ts, b) = grid(o)?;
    let f = integrand(o, b)?;
    let mut rows = Vec::new();
    for t in ts {
        let trace = if args.derivative {
            series_derivative_trace(&f, &p, o.a, t, &s, &q)?
        } else {
            series_integral_trace(&f, &p, o.a, t, &s, &q)?
        };
        budget.charge(trace.report.effort)?;
        for (m, (sum, term)) in trace.partial_sums().into_iter().zip(&trace.terms).enumerate() {
            rows.push(SeriesRow { t, m, re: sum.re, im: sum.im, term_abs: term.norm() });
        }
    }
    Ok(rows)
}

fn mellin_command(args: &MellinArgs, budget: &mut Budget) -> Result<Vec<MellinRow>> {
    let q = budget.spec(&args.tol)?;
    let p = FracParams::new(constant_value(&args.alpha)?, constant_value(&args.beta)?)?;
    let s = MellinPoint::new(constant_value(&args.s)?);
    let f = compile_str(&args.expr, Interval::half_line(0.0), Regularity::Integrable)?;
    let d = args.decay;
    let routes: &[Route] = match args.route {
        Route::All => &[Route::Numeric, Route::Kobayashi, Route::Incgamma],
        r => std::slice::from_ref(match r {
            Route::Numeric => &Route::Numeric,
            Route::Kobayashi => &Route::Kobayashi,
            _ => &Route::Incgamma,
        }),
    };
    let mut rows = Vec::new();
    for route in routes {
        let (name, r) = match route {
            Route::Numeric => {
                let h = tempered_integral_handle(&f, &p, 0.0, &q)?;
                ("numeric", mellin_numeric(&h, s, 0.9 * d.min(p.beta.re), &q))
            }
            Route::Kobayashi => ("kobayashi", mellin_tempered_kobayashi(&f, &p, s, d, &q)),
            _ => ("incgamma", mellin_tempered_incgamma(&f, &p, s, d, &SeriesSpec::default(), &q)),
        };
        let r = match r {
            Err(Error::NonConvergent { partial, .. }) => EvalReport { converged: false, ..partial },
            other => other?,
        };
        budget.charge(r.effort)?;
        rows.push(MellinRow { route: name, re: r.value.re, im: r.value.im, err: r.err_estimate, effort: r.effort, converged: r.converged });
    }
    Ok(rows)
}

fn sign_name(s: SignConvention) -> &'static str {
    match s {
        SignConvention::PropSign => "PropSign",
        SignConvention::LemmaSign => "LemmaSign",
        SignConvention::Undetermined => "Undetermined",
    }
}

/// Records plus whether the suite as a whole holds.
fn suite(which: Suite, seed: u64, n: Option<usize>, q: &QuadratureSpec) -> Result<(Vec<VerificationRecord>, bool)> {
    let identity = |id| identity_suite(id, n, q);
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut u = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let n_random = n.unwrap_or(50);
    let records = match which {
        Suite::Inversion => identity(TheoremId::Inversion)?,
        Suite::Lemma => identity(TheoremId::LemmaComposition)?,
        Suite::Taylor => identity(TheoremId::TaylorTelescope)?,
        Suite::Ineq1 => inequality_suite(TheoremId::Ineq1, n_random, &mut u, q)?,
        Suite::Ineq2 => inequality_suite(TheoremId::Ineq2, n_random, &mut u, q)?,
        Suite::Ineq3 => inequality_suite(TheoremId::Ineq3, n_random, &mut u, q)?,
    };
    let mut ok = records.iter().all(|r| r.pass);
    if matches!(which, Suite::Inversion | Suite::Lemma | Suite::Taylor) {
        match consistent_sign(&records) {
            Some(s) => eprintln!("sign convention: {}", sign_name(s)),
            None => {
                eprintln!("sign convention: inconsistent across instances");
                ok = false;
            }
        }
    }
    Ok((records, ok))
}

fn verify_rows(records: &[VerificationRecord]) -> Vec<VerifyRow> {
    records
        .iter()
        .map(|r| VerifyRow {
            theorem: r.theorem_id.name(),
            residual_or_slack: r.residual_or_slack,
            pass: r.pass,
            sign_convention: sign_name(r.sign_convention),
        })
        .collect()
}

fn verify_command(args: &VerifyArgs, budget: &Budget, cli: &Cli) -> Result<bool> {
    let q = budget.spec(&args.tol)?;
    let (records, ok) = suite(args.suite, args.seed, args.n, &q)?;
    report(cli, &records, ok)
}

fn report(cli: &Cli, records: &[VerificationRecord], ok: bool) -> Result<bool> {
    let passed = records.iter().filter(|r| r.pass).count();
    let summary = format!("PASS {passed}/{}", records.len());
    written(emit(cli.format, &verify_rows(records), Some(&summary)));
    Ok(ok)
}

/// A closed pipe downstream is not an error; other write failures end the
/// process.
fn written(r: std::io::Result<()>) {
    match r {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("tfc: cannot write output: {e}");
            std::process::exit(3);
        }
        _ => {}
    }
}

/// Runs one command; `Ok(false)` means a verification failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let mut budget = Budget::from_env()?;
    let f = cli.format;
    let r = match &cli.command {
        Command::EvalInt(a) => emit(f, &eval_command(Op::Int, a, &mut budget)?, None),
        Command::EvalDer(a) => emit(f, &eval_command(Op::Der, a, &mut budget)?, None),
        Command::GpfInt(a) => emit(f, &eval_command(Op::GpfInt, a, &mut budget)?, None),
        Command::GpfDer(a) => emit(f, &eval_command(Op::GpfDer, a, &mut budget)?, None),
        Command::RlInt(a) => emit(f, &eval_command(Op::RlInt, a, &mut budget)?, None),
        Command::RlDer(a) => emit(f, &eval_command(Op::RlDer, a, &mut budget)?, None),
        Command::Table(a) => emit(f, &table_command(a, &mut budget)?, None),
        Command::Series(a) => emit(f, &series_command(a, &mut budget)?, None),
        Command::Mellin(a) => emit(f, &mellin_command(a, &mut budget)?, None),
        Command::Taylor(a) => {
            let q = budget.spec(&a.tol)?;
            let (records, ok) = suite(Suite::Taylor, 0, a.n, &q)?;
            return report(cli, &records, ok);
        }
        Command::Verify(a) => return verify_command(a, &budget, cli),
    };
    written(r);
    Ok(true)
}
