//! Library half of the `cymod` binary: every subcommand returns its output
//! and exit code so tests can drive it without spawning a process.

pub mod commands;
pub mod presets;

use std::fmt;

/// `--output` format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    /// Tab-separated records that parse back.
    Records,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub out: String,
    pub code: i32,
}

impl Outcome {
    pub fn ok(out: String) -> Outcome {
        Outcome { out, code: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Model(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Model(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Model(m) => write!(f, "model failure: {m}"),
            CliError::Io(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Default minimum number of agreeing primes for `match`.
pub fn formmatch_default() -> usize {
    cymod_core::formmatch::DEFAULT_MIN_PRIMES
}
