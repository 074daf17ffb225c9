//! Command-line front end for the `aluthge` crate: JSON matrix files,
//! diagonal specifications, run configuration and report output.
//!
//! Exit codes: `0` success, `1` I/O or internal failure, `2` parse or usage
//! error, `3` λ outside `(0, 1)` or a singular diagonal, `4` no convergence
//! (partial results are still written), `5` unknown experiment.

pub mod commands;
pub mod config;
pub mod diag_spec;
pub mod error;
pub mod matrix_file;
pub mod report;

use clap::Parser;

pub use config::{Cli, Command, Format, RunConfig};
pub use error::{CliError, Result};

/// Thread cap from `ALUTHGE_THREADS` (`0` or unset means one per core).
pub fn configure_threads() -> Result<()> {
    let n = match std::env::var("ALUTHGE_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| CliError::Parse(format!("ALUTHGE_THREADS must be a non-negative integer, got `{v}`")))?,
        Err(_) => 0,
    };
    if n > 0 {
        // Fails only if a pool already exists, which is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Transform { input, run } => commands::transform(&input, &run.try_into()?),
        Command::Limit { input, run } => commands::limit(&input, &run.try_into()?),
        Command::Model { d, run } => commands::model(&d, &run.try_into()?),
        Command::Experiment { name, d, dim, abc, blocks, threshold, eps, run } => {
            let extra = commands::ExperimentArgs { d, dim, abc, blocks, threshold, eps };
            commands::experiment(&name, &extra, &run.try_into()?)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match configure_threads().and_then(|_| dispatch(cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
