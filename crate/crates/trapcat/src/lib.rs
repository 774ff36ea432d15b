//! Command-line front end and report formats for `trapcat-core`.

#![forbid(unsafe_code)]

pub mod cli;
pub mod ranges;
pub mod report;
pub mod sweep;

pub use cli::{execute, parse_args, CliCommand, CliError};
pub use report::{Format, ReportDocument};
