use std::path::PathBuf;

use mopo::{ErrorKind, MopoError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] MopoError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("plot rendering failed for {}: {message}", path.display())]
    Plot { path: PathBuf, message: String },
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const SELFCHECK: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const DOMAIN: i32 = 3;
    pub const NUMERIC: i32 = 4;
    pub const IO: i32 = 5;
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) => match e.kind() {
                ErrorKind::Domain => exit::DOMAIN,
                ErrorKind::Numeric => exit::NUMERIC,
                ErrorKind::Config => exit::CONFIG,
                ErrorKind::Io => exit::IO,
            },
            CliError::Config(_) => exit::CONFIG,
            CliError::Io { .. } | CliError::Plot { .. } => exit::IO,
            CliError::SelfCheck(_) => exit::SELFCHECK,
        }
    }
}
