use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for each failure family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitStatus {
    Success = 0,
    InputError = 2,
    VerificationFailed = 3,
    InternalError = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("label column `{0}` not found in header")]
    MissingLabelColumn(String),
    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    ParseError { row: usize, column: String, value: String },
    #[error("row {row}: {source}")]
    InvalidRow {
        row: usize,
        #[source]
        source: hqcs_core::Error,
    },
    #[error("label column has {} classes ({}); pass --class-pair to pick two", .0.len(), .0.join(", "))]
    MoreThanTwoClasses(Vec<String>),
    #[error("class `{0}` has no rows")]
    EmptyClass(String),
    #[error("class `{value}` is not one of: {}", .known.join(", "))]
    UnknownClass { value: String, known: Vec<String> },
    #[error("column `{0}` not found in header")]
    UnknownColumn(String),
    #[error("{path}:{line}: {message}")]
    ConfigFile { path: String, line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] hqcs_core::Error),
    #[error("verification failed: {failed} of {total} checks out of tolerance")]
    VerificationFailed { failed: usize, total: usize },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        use hqcs_core::Error as Core;
        match self {
            Self::VerificationFailed { .. } => ExitStatus::VerificationFailed,
            Self::Core(Core::EigenFailure(_)) | Self::Json(_) | Self::Io(_) | Self::ThreadPool(_) => {
                ExitStatus::InternalError
            }
            _ => ExitStatus::InputError,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
