use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("desk-scale exceeded: {n}^{sites} = {dim} states with eigenvectors (limit 2^20)")]
    DeskScale { n: usize, sites: usize, dim: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] onsager_core::Error),

    #[error("serialization: {0}")]
    Serialize(String),

    #[error("{failed} of {total} invariant checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) | CliError::Parse(_) => "invalid_config",
            CliError::DeskScale { .. } => "desk_scale_exceeded",
            CliError::Io { .. } => "io",
            CliError::Core(_) => "computation",
            CliError::Serialize(_) => "serialization",
            CliError::VerifyFailed { .. } => "verify_failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parse(_) => 2,
            CliError::DeskScale { .. } => 3,
            CliError::VerifyFailed { .. } => 4,
            _ => 1,
        }
    }

    /// Machine-readable form printed on stderr before a nonzero exit.
    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            error: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: &'static str,
    pub message: String,
    pub exit_code: i32,
}

pub type Result<T> = std::result::Result<T, CliError>;
