use std::io;

use gaplab_core::Error as CoreError;

/// Failures surfaced to the command line, each mapped to one exit code.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("serialization error: {0}")]
    Format(String),
}

impl LabError {
    /// 2 for anything the user can fix in the input, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            _ => 3,
        }
    }

    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }
}

impl From<CoreError> for LabError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NoConvergence(_) | CoreError::Precision(_) | CoreError::RepeatedTies { .. } => {
                LabError::Numerical(e.to_string())
            }
            _ => LabError::Config(e.to_string()),
        }
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Format(e.to_string())
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Format(e.to_string())
    }
}

pub type LabResult<T> = Result<T, LabError>;
