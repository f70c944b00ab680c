//! Experiment drivers behind the `tmcmc` binary.
//!
//! Each experiment consumes a serializable spec, writes CSV outputs plus a
//! `manifest.json` recording the exact spec and library version, and
//! returns a typed report for programmatic use. Re-running a manifest
//! reproduces the outputs byte for byte.

pub mod csvio;
pub mod experiments;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tmcmc::Error),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

impl CliError {
    /// Exit-code contract: 0 ok, 1 bad arguments, 2 runtime error,
    /// 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidArgs(_) => 1,
            CliError::Core(e) if e.is_numeric() => 3,
            CliError::Core(tmcmc::Error::InvalidConfig(_))
            | CliError::Core(tmcmc::Error::DimensionMismatch(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Manifest(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
