//! Library half of the `cohdistill` command: parameter sweeps, single-state analysis and
//! the property-verification harness. The binary in `main.rs` only parses flags.

pub mod analyze;
pub mod config;
pub mod error;
pub mod format;
pub mod sweep;
pub mod verify;

pub use error::{CliError, CliResult};

/// Sizes the global rayon pool from `COHDISTILL_THREADS` when set.
pub fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("COHDISTILL_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("COHDISTILL_THREADS must be a positive integer, got `{value}`")))?;
    // a pool already built (tests, embedding) keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
