//! Command-line front end: configuration parsing, deterministic runs and
//! JSON/CSV reports.

pub mod config;
pub mod run;

pub use config::{parse_config, ExperimentConfig, Format, ParseError, RunOptions};
pub use run::{run, Outcome, Report, RunError};
