//! Batch front-end for `vmcascade-core`: config ingestion, the
//! subcommands and CSV output.

pub mod commands;
pub mod config;
pub mod csv;
pub mod fme_text;
pub mod oracle_check;

use commands::CheckFailed;
use config::Invalid;

/// Process exit status for an error: 2 for invalid input, 3 when the
/// budget cannot be met, 4 when a check fails, 1 otherwise.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<CheckFailed>().is_some() {
        return 4;
    }
    if e.downcast_ref::<Invalid>().is_some() {
        return 2;
    }
    match e.downcast_ref::<vmcascade_core::Error>() {
        Some(vmcascade_core::Error::Infeasible(_)) => 3,
        Some(_) => 2,
        None => 1,
    }
}
