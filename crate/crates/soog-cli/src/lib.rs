//! Library backing the `soog` binary: configuration parsing, the pipeline
//! commands, and the exit-code policy.

pub mod commands;
pub mod config;

use soog::SoogError;

/// Exit codes: 1 usage/parameter problems, 2 internal invariant violations,
/// 3 missing upstream artifacts or I/O failures.
pub fn exit_code(e: &SoogError) -> i32 {
    match e {
        SoogError::Parameter(_) | SoogError::Domain(_) => 1,
        SoogError::Dependency(_) | SoogError::Io(_) => 3,
        _ => 2,
    }
}
