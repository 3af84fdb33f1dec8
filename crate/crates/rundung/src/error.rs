use std::path::PathBuf;

/// Errors surfaced by the command-line tool, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Format(String),
    #[error("training failed: {0}")]
    Training(#[source] rundung_core::Error),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 usage or configuration, 2 validation, 3 training.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::Io { .. } | AppError::Format(_) => 1,
            AppError::Validation(_) => 2,
            AppError::Training(_) => 3,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
