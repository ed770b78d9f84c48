//! Command-line front end: argument parsing, set-description files, CSV
//! and SVG output.

pub mod commands;
pub mod error;
pub mod output;
pub mod setfile;
pub mod suite;

use std::ffi::OsString;

use clap::Parser;

use commands::{Cli, Context};
use error::{CliError, ErrorKind};

pub const BUDGET_VAR: &str = "BESICOVITCH_CELL_BUDGET";

fn cell_budget() -> Result<usize, CliError> {
    match std::env::var(BUDGET_VAR) {
        Err(_) => Ok(besicovitch_core::expr::DEFAULT_CELL_BUDGET),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::usage(format!("{BUDGET_VAR}={v} is not a positive integer"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Context::with_budget(cell_budget()?);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::usage("--workers must be positive"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::new(ErrorKind::Input, format!("worker pool: {e}")))?;
    pool.install(|| commands::run(cli.command, &ctx))
}

/// Parses `args`, runs the command and returns the exit status. Failures
/// print one JSON line on stderr.
pub fn main_with(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            let err = CliError::usage(first);
            eprintln!("{}", err.to_json_line());
            return err.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            e.exit_code()
        }
    }
}
