use std::path::PathBuf;

/// Failures of a CLI run, each tied to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Domain(aluthge::Error),
    /// Some λ did not converge. Partial results were already written.
    #[error("{0}")]
    NotConverged(String),
    #[error("unknown experiment `{0}`; expected one of: {names}", names = crate::commands::EXPERIMENTS.join(", "))]
    UnknownExperiment(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(e) => match e {
                aluthge::Error::LambdaOutOfRange(_) | aluthge::Error::SingularD(_) => 3,
                aluthge::Error::DidNotConverge(_) | aluthge::Error::NoConvergence(_) => 4,
                aluthge::Error::InvalidInput(_) | aluthge::Error::BadShape(..) | aluthge::Error::NonFinite(..) => 2,
                _ => 1,
            },
            CliError::NotConverged(_) => 4,
            CliError::UnknownExperiment(_) => 5,
            CliError::Io { .. } | CliError::Serialize(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<aluthge::Error> for CliError {
    fn from(e: aluthge::Error) -> Self {
        match e {
            aluthge::Error::DidNotConverge(trace) => CliError::NotConverged(format!(
                "iteration at lambda = {} stopped with {:?} after {} steps",
                trace.lambda, trace.stop_reason, trace.n_steps
            )),
            other => CliError::Domain(other),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
