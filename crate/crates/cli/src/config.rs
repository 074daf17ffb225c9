use std::path::PathBuf;

use aluthge::experiments::Settings;
use aluthge::{CMatrix, StopPolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(name = "aluthge", version, about = "Iterated λ-Aluthge transforms: limits, derivative models and experiments")]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply one transform step and write the result plus a sidecar of invariants.
    Transform {
        /// Input matrix file.
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Iterate to the limit for each λ and report the scan.
    Limit {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Dump the entrywise derivative model at diag(d).
    Model {
        /// Diagonal, e.g. `1,2`, `1+1i,2@0.5`, `[[1,0],[0,2]]` or `cube-roots`.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a named experiment: section44, reflection, permutation, con-dos,
    /// witness, conjecture or rates.
    Experiment {
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        /// Matrix size for `reflection`.
        #[arg(long)]
        dim: Option<usize>,
        /// `a,b,c` with abc = 1 for `permutation`.
        #[arg(long, value_delimiter = ',')]
        abc: Option<Vec<f64>>,
        /// Multiplicities `n,k` of the two eigenvalues for `con-dos`.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<usize>>,
        /// Dispersion threshold for `witness`.
        #[arg(long)]
        threshold: Option<f64>,
        /// Perturbation size for `rates`.
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Comma-separated λ values.
    #[arg(long, value_delimiter = ',', conflicts_with = "lambda", allow_negative_numbers = true)]
    pub lambda_grid: Option<Vec<f64>>,
    /// Absolute step tolerance; default 1e-11·‖T‖₂.
    #[arg(long, allow_negative_numbers = true)]
    pub step_tol: Option<f64>,
    /// Absolute normality tolerance; default 1e-9·‖T‖₂.
    #[arg(long, allow_negative_numbers = true)]
    pub normality_tol: Option<f64>,
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub cond_bound: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated run options.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub lambdas: Option<Vec<f64>>,
    pub step_tol: Option<f64>,
    pub normality_tol: Option<f64>,
    pub max_iters: usize,
    pub seed: u64,
    pub samples: Option<usize>,
    pub cond_bound: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::Parse(format!("--{name} must be positive, got {x}"))),
        other => Ok(other),
    }
}

impl TryFrom<RunArgs> for RunConfig {
    type Error = CliError;

    /// Bad tolerances are usage errors (exit 2); λ outside `(0, 1)` is a
    /// domain error (exit 3).
    fn try_from(a: RunArgs) -> Result<Self> {
        if a.max_iters == 0 {
            return Err(CliError::Parse("--max-iters must be at least 1".into()));
        }
        if !(a.cond_bound > 1.0 && a.cond_bound.is_finite()) {
            return Err(CliError::Parse(format!("--cond-bound must exceed 1, got {}", a.cond_bound)));
        }
        let lambdas = match (a.lambda, a.lambda_grid) {
            (Some(l), _) => Some(vec![l]),
            (None, Some(g)) if g.is_empty() => return Err(CliError::Parse("--lambda-grid is empty".into())),
            (None, g) => g,
        };
        for &l in lambdas.iter().flatten() {
            if !(l > 0.0 && l < 1.0) {
                return Err(aluthge::Error::LambdaOutOfRange(l).into());
            }
        }
        Ok(Self {
            lambdas,
            step_tol: positive("step-tol", a.step_tol)?,
            normality_tol: positive("normality-tol", a.normality_tol)?,
            max_iters: a.max_iters,
            seed: a.seed,
            samples: a.samples,
            cond_bound: a.cond_bound,
            format: a.format,
            out: a.out,
        })
    }
}

impl RunConfig {
    pub fn settings(&self) -> Settings {
        Settings {
            step_tol: self.step_tol,
            normality_tol: self.normality_tol,
            max_iters: self.max_iters,
            cond_bound: self.cond_bound,
        }
    }

    pub fn policy_for(&self, t: &CMatrix) -> StopPolicy {
        self.settings().policy_for(t)
    }

    pub fn lambdas_or(&self, default: &[f64]) -> Vec<f64> {
        self.lambdas.clone().unwrap_or_else(|| default.to_vec())
    }

    /// The single λ of this run; a grid of more than one value is rejected.
    pub fn lambda_or(&self, default: f64) -> Result<f64> {
        match self.lambdas.as_deref() {
            None => Ok(default),
            Some([l]) => Ok(*l),
            Some(_) => Err(CliError::Parse("this command takes a single --lambda".into())),
        }
    }
}
