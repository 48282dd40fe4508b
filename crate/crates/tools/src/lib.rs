//! File formats, JSON run reports and subcommands for the `ttp` binary.

pub mod commands;
pub mod format;
pub mod report;

pub use report::RunReport;
