//! Command-line front end for `squeeze-hpm`.
//!
//! Each subcommand renders into a [`commands::Rendered`] value first and is
//! written out afterwards, so the same code path serves the binary and the
//! tests.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

pub use commands::{execute, Rendered};
pub use config::{Cli, Command, Format, Opts, RunConfig};
pub use error::CliError;
