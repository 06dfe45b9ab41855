//! Configuration, experiment pipelines, plot output and the acceptance suite
//! behind the `nsp-waves` command.

pub mod commands;
pub mod config;
pub mod error;
pub mod plot;
pub mod verify;

pub use commands::{run_command, Command, CommandOutput};
pub use config::{parse_config, parse_config_str, ExperimentConfig};
pub use error::{CliError, CliResult};
