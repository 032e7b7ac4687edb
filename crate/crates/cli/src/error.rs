use std::io;

use besselrules::Error as LibError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REGIME: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{context}: {source}")]
    Library {
        context: String,
        #[source]
        source: LibError,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn lib(context: impl Into<String>, source: LibError) -> Self {
        CliError::Library {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::Library { source, .. } => match source {
                LibError::InvalidArgument(_) => EXIT_USAGE,
                LibError::PhaseNotReal { .. } => EXIT_VERIFICATION,
                LibError::Pole(_)
                | LibError::Convergence { .. }
                | LibError::OracleFailure(_)
                | LibError::Range(_)
                | LibError::Accuracy { .. }
                | LibError::InvalidRegime(_) => EXIT_REGIME,
            },
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        CliError::lib("error", e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
