//! Verification scenarios, configuration, reports and the on-disk cache behind the CLI.

pub mod cache;
pub mod config;
pub mod report;
pub mod scalars;
pub mod scenarios;

pub use config::{OutputFormat, RunConfig};
pub use report::{Verdict, VerificationReport};
