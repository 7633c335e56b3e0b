//! Library side of the `opfactor` command-line tool: problem files, the
//! subcommands and their reports. `main.rs` only parses arguments and maps
//! results to exit codes.

pub mod commands;
pub mod problem;
pub mod report;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use commands::{run, Command, Settings};
pub use problem::ProblemFile;
pub use report::Report;

/// Exit status for a completed run whose checks all passed.
pub const EXIT_OK: u8 = 0;
/// Malformed input: bad flags, unreadable or invalid problem files, points
/// where the requested quantity is undefined.
pub const EXIT_INPUT: u8 = 2;
/// Numerical failure or a failed identity check.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(opfactor::Error),
}

impl From<opfactor::Error> for CliError {
    fn from(e: opfactor::Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "invalid input: {msg}"),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Core(e) if e.is_input_error() => EXIT_INPUT,
            CliError::Core(_) => EXIT_NUMERICAL,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Core(e) => e.kind(),
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            error: self.kind().to_string(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        }
    }
}

/// What goes to stderr, as one JSON line, when a run fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub error: String,
    pub message: String,
    pub exit_code: u8,
}
