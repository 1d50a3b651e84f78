//! Command-line front end: problem files, subcommands and run reports.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

pub use error::CliError;
pub use problem::Problem;
pub use report::RunReport;
