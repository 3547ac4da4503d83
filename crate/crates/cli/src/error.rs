//! CLI error type with process exit codes.
//!
//! Exit code 1: the input (config file or flags) is invalid.
//! Exit code 2: a verification suite or consistency check failed.
//! Exit code 3: an input/output operation failed.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// The user-supplied configuration or flags are invalid.
    Validation(String),
    /// A verification suite reported a failure, or an internal
    /// consistency check caught a contradiction.
    Suite(String),
    /// Reading or writing a file failed.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Suite(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "invalid input: {msg}"),
            CliError::Suite(msg) => write!(f, "verification failure: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<dupsys_core::Error> for CliError {
    fn from(e: dupsys_core::Error) -> Self {
        match e {
            dupsys_core::Error::InvalidParameter(m) => CliError::Validation(m),
            dupsys_core::Error::InvalidMeasure(m) => CliError::Validation(m),
            dupsys_core::Error::Internal(m) => CliError::Suite(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
