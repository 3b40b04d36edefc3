//! Definition files, DOT export and the suite driver behind the `nabla-ops` command.

pub mod defs;
pub mod dot;
pub mod suites;

pub use defs::{parse_monoid, parse_multicat, DefError, MulticatDef};
pub use dot::{export_dot, to_dot};
pub use suites::{run_suite, OperadName, Suite, SuiteConfig, SuiteError};

/// Worker count from `NABLA_OPS_JOBS`, if set to a positive integer.
pub fn jobs_from_env() -> Option<usize> {
    std::env::var("NABLA_OPS_JOBS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}
