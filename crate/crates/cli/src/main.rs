#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod output;
mod run;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use tfc_core::Error;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Domain(_)
        | Error::Pole(_)
        | Error::Regularity(_)
        | Error::Synchrony(_)
        | Error::Monotonicity(_)
        | Error::Positivity(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let help = args::after_help();
    let matches = args::Cli::command()
        .after_help(help.clone())
        .mut_subcommands(|s| s.after_help(help.clone()))
        .get_matches();
    let cli = args::Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    match run::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tfc: {e}");
            if let (Error::Parse(p), Some(text)) = (&e, expr_of(&cli.command)) {
                eprintln!("{}", p.pointer(text));
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn expr_of(c: &args::Command) -> Option<&str> {
    use args::Command::*;
    match c {
        EvalInt(a) | EvalDer(a) | GpfInt(a) | GpfDer(a) | RlInt(a) | RlDer(a) => Some(&a.expr),
        Series(a) => Some(&a.op.expr),
        Table(a) => Some(&a.op.expr),
        Mellin(a) => Some(&a.expr),
        Taylor(_) | Verify(_) => None,
    }
}
