//! Batch verification of the identities implemented in `heunkit-core`.
//!
//! Each suite samples admissible parameters and points from a seeded stream,
//! evaluates both sides of every identity and records the residual against a
//! tolerance. Reports are JSON and reproducible given the seed.

pub mod catalog;
pub mod cli;
pub mod config;
pub mod plan;
pub mod report;
pub mod sampling;
pub mod suites;

pub use plan::SamplePlan;
pub use report::{IdentityCase, IdentityReport, Verdict};
pub use suites::{run_all, run_suite, run_suites, SUITES};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("no rule with label {0:?}")]
    UnknownRule(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] heunkit_core::HeunError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
