//! Runner side of the gap-spectroscopy toolkit: experiment configs, the
//! snapshot/spectrum file formats, a worker-pool driver around the core
//! engine, the run report, and the self-validation suite.
//!
//! The numerics live in `gapscope-core`; everything here is IO,
//! orchestration, and reference oracles.

pub mod config;
pub mod dense;
pub mod driver;
pub mod io;
pub mod report;
pub mod validate;

use std::process::ExitCode;

/// CLI-level errors with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration or file contents (exit 2).
    #[error("config error: {0}")]
    Config(String),
    /// Request beyond simulator capacity (exit 3).
    #[error("capacity error: {0}")]
    Capacity(String),
    /// Validation checks failed (exit 1).
    #[error("validation failed: {0}")]
    Validation(String),
    /// Filesystem trouble (exit 2).
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(1),
            CliError::Config(_) | CliError::Io(_) => ExitCode::from(2),
            CliError::Capacity(_) => ExitCode::from(3),
        }
    }
}

impl From<gapscope_core::Error> for CliError {
    fn from(e: gapscope_core::Error) -> Self {
        match e {
            gapscope_core::Error::Capacity { .. } => CliError::Capacity(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CliError>;
