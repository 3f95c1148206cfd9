//! Optimizer settings assembled from the shared command-line flags.

use cohdistill_core::OptimizerConfig;

use crate::error::{CliError, CliResult};

/// Parses `NxM` into `(n_theta, n_phi)`.
pub fn parse_grid(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("--grid expects NxM with positive integers, got `{text}`"));
    let (n, m) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    if n < 2 || m < 1 {
        return Err(bad());
    }
    Ok((n, m))
}

pub fn optimizer_config(grid: Option<&str>, refine: Option<usize>, tol: Option<f64>) -> CliResult<OptimizerConfig> {
    let mut cfg = OptimizerConfig::default();
    if let Some(g) = grid {
        (cfg.n_theta, cfg.n_phi) = parse_grid(g)?;
    }
    if let Some(k) = refine {
        cfg.refine_iterations = k;
    }
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
        cfg.tolerance = t;
    }
    cfg.validate()?;
    Ok(cfg)
}
