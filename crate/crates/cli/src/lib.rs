//! Configuration, presets, artifact writers and command implementations
//! behind the `qneb` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;

pub use config::ExperimentConfig;
pub use error::{CliError, EXIT_CONFIG, EXIT_RUNTIME};
