use std::path::PathBuf;

use cohdistill_core::Error as CoreError;
use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("data: {0}")]
    Data(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 0 success, 2 I/O, 64 usage, 65 data, 70 internal check failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 64,
            Self::Io { .. } => 2,
            Self::Data(_) => 65,
            Self::CheckFailed(_) => 70,
            Self::Csv(e) if e.is_io_error() => 2,
            Self::Csv(_) => 70,
            Self::Core(e) => match e {
                CoreError::InvalidConfig(_) => 64,
                CoreError::Json(_)
                | CoreError::InvalidState(_)
                | CoreError::NotHermitian(_)
                | CoreError::NegativeEigenvalue(_)
                | CoreError::DimensionError { .. }
                | CoreError::LabelCollision(_)
                | CoreError::LabelNotFound(_)
                | CoreError::InvalidPartition(_)
                | CoreError::PurityRequired(_) => 65,
                _ => 70,
            },
        }
    }
}
