use std::path::PathBuf;

/// Failures of a CLI run, grouped by the exit code they map to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] physdist_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_IO: u8 = 1;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        use physdist_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => EXIT_VALIDATION,
            CliError::Core(e) if e.is_resource_failure() => EXIT_RESOURCE,
            CliError::Core(E::FitFailed { .. } | E::NoCrossings { .. }) => EXIT_RESOURCE,
            CliError::Core(_) => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
