//! Library side of the `killer-toolkit` binary: report types and the
//! subcommand implementations, so that tests can drive them directly.

pub mod commands;
pub mod report;

pub use commands::{CliError, LIMITS_ENV};
pub use report::{CertificateReport, Status};
