//! Command-line front end for `hqcs-core`: CSV ingestion, run
//! configuration, parallel drivers and report files.

pub mod cli;
pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod output;

pub use config::RunConfig;
pub use error::{CliError, ExitStatus};
