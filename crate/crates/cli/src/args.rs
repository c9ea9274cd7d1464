use clap::{Args, Parser, Subcommand, ValueEnum};

/// Help epilogue: the expression grammar, exit codes and environment.
pub fn after_help() -> String {
    let grammar: String = tfc_core::expr::GRAMMAR.lines().map(|l| format!("  {l}\n")).collect();
    format!(
        "Expressions (--expr) use the variable t:\n\n{grammar}\n\
         Complex parameters (--alpha, --beta, --s) accept constant expressions, e.g. 0.5+1i.\n\n\
         Exit status: 0 success, 1 verification failure, 2 malformed input or\n\
         domain error, 3 numerical failure or effort budget exceeded.\n\
         TFC_MAX_EFFORT caps the total number of integrand evaluations."
    )
}

#[derive(Parser, Debug)]
#[command(name = "tfc", version, about = "Tempered and proportional fractional operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long = "format", visible_alias = "out-format", alias = "out_format", global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tempered fractional integral I^(alpha,beta)
    EvalInt(OpArgs),
    /// Tempered fractional derivative D^(alpha,beta)
    EvalDer(OpArgs),
    /// Left GPF integral with proportionality --rho
    GpfInt(OpArgs),
    /// Left GPF derivative with proportionality --rho
    GpfDer(OpArgs),
    /// Riemann-Liouville integral (beta ignored)
    RlInt(OpArgs),
    /// Riemann-Liouville derivative (beta ignored)
    RlDer(OpArgs),
    /// Convergence of the RL-series representation, one row per term
    Series(SeriesArgs),
    /// Mellin transform of the tempered integral by three routes
    Mellin(MellinArgs),
    /// Telescoped fractional Taylor identity on the built-in corpus
    Taylor(TaylorArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Tabulate an operator on [a, b], endpoints included
    Table(TableArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Tolerances {
    #[arg(long, alias = "rel_tol")]
    pub rel_tol: Option<f64>,
    #[arg(long, alias = "abs_tol")]
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegularityArg {
    Smooth,
    Integrable,
}

#[derive(Args, Debug, Clone)]
pub struct OpArgs {
    /// Integrand in t
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub beta: String,
    /// GPF proportionality, 0 < rho <= 1
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub a: f64,
    /// Right end of the domain of f (defaults to the largest t)
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// A single evaluation point; otherwise --grid-points points in (a, b]
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, alias = "grid_points", default_value_t = 1)]
    pub grid_points: usize,
    /// Claimed smoothness of f
    #[arg(long, value_enum, default_value_t = RegularityArg::Smooth)]
    pub regularity: RegularityArg,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Args, Debug, Clone)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub op: OpArgs,
    /// Expand the derivative instead of the integral
    #[arg(long)]
    pub derivative: bool,
    #[arg(long, default_value_t = 200)]
    pub max_terms: usize,
    #[arg(long, default_value_t = 1e-16)]
    pub tail_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    All,
    Numeric,
    Kobayashi,
    Incgamma,
}

#[derive(Args, Debug, Clone)]
pub struct MellinArgs {
    /// f(u) on [0, inf)
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Exponential decay rate of f
    #[arg(long, default_value_t = 1.0)]
    pub decay: f64,
    #[arg(long, value_enum, default_value_t = Route::All)]
    pub route: Route,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Args, Debug, Clone)]
pub struct TaylorArgs {
    /// Number of corpus instances (default: all)
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Inversion,
    Lemma,
    Taylor,
    Ineq1,
    Ineq2,
    Ineq3,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Seed of the PCG64 generator for randomized suites
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of instances (randomized suites default to 50)
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableOp {
    F,
    Int,
    Der,
    GpfInt,
    GpfDer,
    RlInt,
    RlDer,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    #[command(flatten)]
    pub op: OpArgs,
    #[arg(long, value_enum, default_value_t = TableOp::Int)]
    pub of: TableOp,
}
