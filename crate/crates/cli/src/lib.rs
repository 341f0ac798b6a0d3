//! Verification driver for `cayley-core`: run configuration, the suites,
//! reports in JSON and CSV, and the line-set interchange format.

pub mod config;
pub mod export;
pub mod lineset;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Format, RunConfig, Suite};
pub use report::{Check, Report, SuiteResult};
