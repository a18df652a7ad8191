use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] pwreath_core::Error),
}

impl CliError {
    /// 3 for exceeded bounds, 2 for every other configuration or input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(pwreath_core::Error::BoundExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
