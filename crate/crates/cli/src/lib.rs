//! Command-line front end for `netgame-core`: run configuration, edge-list
//! and graph exports, and the `simulate`, `verify`, `stability-check` and
//! `sweep` subcommands.
//!
//! Exit status: 0 for success (converged, stable, all checks passed), 1 for
//! usage or configuration errors, 2 for non-convergence, an unstable graph or
//! a failed check.

pub mod cli;
pub mod commands;
pub mod config;
pub mod edgelist;
pub mod error;
pub mod export;
pub mod output;
pub mod ranges;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::commands::Outcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

/// Parses `args` (including the program name), runs the command and returns
/// the exit status. Diagnostics go to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(args) => commands::simulate(args, out),
        Command::Verify(args) => commands::verify(args, out),
        Command::StabilityCheck(args) => commands::stability_check(args, out),
        Command::Sweep(args) => commands::sweep(args, out),
    };
    match result {
        Ok(Outcome::Success) => EXIT_OK,
        Ok(Outcome::Negative) => EXIT_NEGATIVE,
        Err(e) => {
            eprintln!("netgame: {e}");
            EXIT_USAGE
        }
    }
}
