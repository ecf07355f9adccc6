//! Configuration files, the command-line front end and figure output for
//! `thermophase-core`.

pub mod cli;
pub mod config;
pub mod figure;
pub mod table;

pub use cli::{run, Cli, Outcome, RunError};
pub use config::{Config, ConfigError};
