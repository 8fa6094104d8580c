use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("unknown preset or missing file: {0}")]
    NotFound(String),

    #[error("timing undefined: the transition-time condition holds identically for this system (no energy-violating amplitude ever becomes nonzero), and whether or when a transition then occurs is an open question; no time is chosen")]
    TimingUndefined,

    #[error("numerical non-convergence: {0} (partial outputs were written and flagged)")]
    NonConvergence(String),

    #[error(transparent)]
    Core(#[from] tsd_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::NotFound(_) => 2,
            CliError::TimingUndefined => 3,
            CliError::NonConvergence(_) => 4,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
