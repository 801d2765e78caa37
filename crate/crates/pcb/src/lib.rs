//! File formats, experiment commands and the parallel runner behind the
//! `pcb` binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod report;

pub use commands::ExperimentConfig;
pub use error::{CliError, Result};

/// Crate version plus `git describe` output when built from a checkout.
pub const VERSION: &str = env!("PCB_VERSION");
