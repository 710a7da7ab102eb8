use std::io;
use std::path::Path;

use thiserror::Error;

/// Failures, grouped by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<pprpaths::Error> for CliError {
    fn from(err: pprpaths::Error) -> Self {
        use pprpaths::Error as E;
        let message = err.to_string();
        match err {
            E::InvalidParameter(_) | E::InvalidSeed(_) => CliError::Config(message),
            E::Parse { .. } | E::EmptyGraph | E::Io(_) => CliError::Io(message),
            E::UndefinedSet(_)
            | E::EmptySupport
            | E::SizeGuard { .. }
            | E::EventOverflow { .. } => CliError::Numeric(message),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
