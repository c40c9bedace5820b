//! `dpcp`: generate synthetic data, fit subspaces, run experiment grids and
//! theory checks.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{FitArgs, GenArgs, GridArgs, RocArgs, TheoryArgs};

#[derive(Debug, Parser)]
#[command(name = "dpcp", version, about = "Robust subspace recovery by dual principal component pursuit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic inlier/outlier dataset and its true subspace basis.
    Gen(GenArgs),
    /// Estimate the orthogonal complement of the inlier subspace of a dataset.
    Fit(FitArgs),
    /// Run a grid of synthetic experiments described by a JSON config.
    Grid(GridArgs),
    /// Estimate the uniformity and circumradius quantities of synthetic data
    /// and check the recovery conditions.
    TheoryCheck(TheoryArgs),
    /// ROC curve of the distance signal of a fitted complement.
    Roc(RocArgs),
}

/// Exit code 1: bad invocation or arguments. Exit code 2: failure while running.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<dpcp_core::Error> for CliError {
    fn from(e: dpcp_core::Error) -> Self {
        match e {
            dpcp_core::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Fit(a) => commands::fit(a),
        Command::Grid(a) => commands::grid(a),
        Command::TheoryCheck(a) => commands::theory_check(a),
        Command::Roc(a) => commands::roc(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
