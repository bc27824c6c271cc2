//! Batch verification harness: configuration, seeded suites, reports.
//!
//! Exit-code contract of the `qkz-kit` binary: 0 all checks passed,
//! 1 at least one verification failed, 2 configuration error, 3 I/O error.

pub mod config;
pub mod report;
pub mod suites;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),

    /// A pole rejection inside a sweep: the case is recorded as skipped.
    #[error("skipped: {0}")]
    Skip(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Io(_) => 3,
            HarnessError::Skip(_) => 0,
        }
    }
}
