use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("config key `{key}`: {message}")]
    Invalid { key: String, message: String },

    #[error("{context}: {source}")]
    Core { context: &'static str, source: nsp_core::Error },

    #[error("nothing to plot: {0}")]
    EmptySeries(String),
}

impl CliError {
    pub fn invalid(key: &str, message: impl Into<String>) -> Self {
        Self::Invalid { key: key.to_string(), message: message.into() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a pipeline stage name to core errors.
pub trait Context<T> {
    fn context(self, stage: &'static str) -> CliResult<T>;
}

impl<T> Context<T> for nsp_core::Result<T> {
    fn context(self, stage: &'static str) -> CliResult<T> {
        self.map_err(|source| CliError::Core { context: stage, source })
    }
}
