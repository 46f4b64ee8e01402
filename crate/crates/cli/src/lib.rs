//! Structured front end to the residue engine: JSON query specs in,
//! JSON or CSV reports out, with fixed exit codes.

pub mod commands;
pub mod report;
pub mod spec;

use std::fmt;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const INSTABILITY: i32 = 3;
}

/// An error with the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError {
            code: exit::VALIDATION,
            message: msg.into(),
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError {
            code: exit::INSTABILITY,
            message: msg.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<parchi::Error> for CliError {
    fn from(e: parchi::Error) -> Self {
        if e.is_validation() {
            CliError::validation(e.to_string())
        } else {
            CliError::internal(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::validation(format!("malformed JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
