//! `occtime` command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification or a numerical routine that
//! did not converge, 2 invalid usage or parameters out of range.

mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Invalid command line or configuration; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(e: &anyhow::Error) -> u8 {
    use occtime_core::Error as E;
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<E>() {
        Some(E::Quadrature { .. } | E::Inversion { .. } | E::Singular(_) | E::Io(_) | E::Csv(_) | E::Json(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(UsageError("--workers must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Command::Moments(a) => commands::moments(a),
        Command::Mgf(a) => commands::mgf(a),
        Command::Density(a) => commands::density(a),
        Command::Simulate(a) => commands::simulate_cmd(a),
        Command::Invert(a) => commands::invert(a),
        Command::Verify(a) => commands::verify_cmd(a),
    }
}

fn main() -> ExitCode {
    let argv = match config::merge_argv(std::env::args_os().collect()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    // clap exits with 2 on usage errors and 0 for --help / --version.
    let cli = Cli::parse_from(argv);
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
