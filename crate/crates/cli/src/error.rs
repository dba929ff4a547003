use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid state: {0}")]
    Validation(#[source] eof_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] eof_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for unreadable input or bad arguments, 3 for a state that fails
    /// validation, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Parse { .. } | Self::Read { .. } | Self::Usage(_) => 2,
            Self::Validation(_) => 3,
            Self::Core(_) | Self::Io { .. } | Self::Csv(_) | Self::VerifyFailed(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
