//! Error type shared by every subcommand, carrying the process exit
//! code: configuration/schema problems exit 2, computation failures
//! exit 1.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The run configuration (file, schema, or flag combination) is
    /// invalid. Exit code 2.
    #[error("{0}")]
    Config(String),
    /// A computation failed or a constraint was not met. Exit code 1.
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Computation(_) => 1,
        }
    }
}

/// Shorthand constructors so call sites stay readable.
pub fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn computation_error(msg: impl Into<String>) -> CliError {
    CliError::Computation(msg.into())
}
