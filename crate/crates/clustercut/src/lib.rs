//! Batch driver around `clustercut-core`: configuration, job bundles on disk,
//! reconstruction reports and the scaling sweep.

pub mod bundle;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
