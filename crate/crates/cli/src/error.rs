use std::fmt::Display;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failure of a command, mapped to the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Statistically or operationally failed run (e.g. diverged training).
    #[error("{0}")]
    Runtime(String),
    /// Invalid flags or flag combinations.
    #[error("{0}")]
    Usage(String),
    /// Unreadable, unwritable or unparsable file.
    #[error("{}: {message}", path.display())]
    File { path: PathBuf, message: String },
    /// Readable input the requested test cannot use.
    #[error("{0}")]
    Data(c2st::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Usage(_) => 2,
            CliError::File { .. } => 3,
            CliError::Data(_) => 4,
        }
    }

    pub fn file(path: &Path, message: impl Display) -> Self {
        CliError::File {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }
}

impl From<c2st::Error> for CliError {
    fn from(e: c2st::Error) -> Self {
        use c2st::Error as E;
        match e {
            E::Domain { .. } | E::Config(_) | E::NotUnivariate { .. } => CliError::Usage(e.to_string()),
            E::Diverged { .. } | E::Degenerate(_) => CliError::Runtime(e.to_string()),
            other => CliError::Data(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
