//! `widom`: potential-theory queries, minimax solves, sweeps, lemniscate
//! comparisons and limit predictions for weighted Chebyshev problems on arcs.

mod args;
mod commands;
mod error;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { error::EXIT_PARSE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Potential(a) => commands::potential(a),
        Command::Solve(a) => commands::solve(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Lemniscate(a) => commands::lemniscate(a),
        Command::Predict(a) => commands::predict(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("widom: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => error::EXIT_PARSE,
            CliError::Domain(_) => error::EXIT_DOMAIN,
            CliError::Extrapolation { .. } => error::EXIT_EXTRAPOLATION,
            CliError::NoConvergence(_) => error::EXIT_NO_CONVERGENCE,
        }
    }
}
