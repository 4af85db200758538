//! Scenario-driven front end to `fedosov-core`: parses scenario files, runs
//! the check commands and renders reports.

pub mod commands;
pub mod report;
pub mod scenario;

pub use commands::{run, Command};
pub use report::{Check, Report, Section};
pub use scenario::Scenario;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] fedosov_core::Error),
    #[error("scenario syntax: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
}
