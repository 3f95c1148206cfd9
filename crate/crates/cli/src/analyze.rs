//! Single-state report: assisted distillable coherence for every partition around one ancilla.

use std::fmt::Write as _;
use std::path::Path;

use cohdistill_core::coherence::relative_entropy_coherence;
use cohdistill_core::densmat::json::from_json_str;
use cohdistill_core::distill::{c_cop, qi_bound};
use cohdistill_core::{DensityMatrix, Error as CoreError, OptimizerConfig};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::format::fmt_sig;

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub distill_on: Vec<String>,
    pub c_cop: f64,
    pub theta: f64,
    pub phi: f64,
    /// `C_r` of the distilled marginal, the unassisted value.
    pub unassisted: f64,
    /// QI relative entropy `C_r^{A|X}`, the upper bound.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauSummary {
    pub c_abc: f64,
    pub c_ab: f64,
    pub c_ac: f64,
    pub tau: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub labels: Vec<String>,
    pub ancilla: String,
    pub purity: f64,
    pub partitions: Vec<PartitionReport>,
    pub tau: Option<TauSummary>,
}

/// Reads and validates a density file. Unreadable files are I/O errors; anything that
/// fails to parse or validate is a data error carrying the defect report.
pub fn load_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    from_json_str(&text).map_err(|e| match e {
        CoreError::InvalidState(report) => CliError::Data(format!("{}: invalid density matrix ({report})", path.display())),
        other => CliError::Data(format!("{}: {other}", path.display())),
    })
}

fn partition(rho: &DensityMatrix, ancilla: &str, distill_on: Vec<String>, cfg: &OptimizerConfig) -> CliResult<PartitionReport> {
    let report = c_cop(rho, ancilla, &distill_on, cfg)?;
    Ok(PartitionReport {
        c_cop: report.value,
        theta: report.optimal_basis.theta(),
        phi: report.optimal_basis.phi(),
        unassisted: relative_entropy_coherence(&rho.partial_trace(&distill_on)?)?,
        bound: qi_bound(rho, ancilla, &distill_on)?,
        distill_on,
    })
}

pub fn analyze(rho: &DensityMatrix, ancilla: Option<&str>, cfg: &OptimizerConfig) -> CliResult<AnalyzeReport> {
    let labels = rho.labels().names().to_vec();
    let ancilla = ancilla.unwrap_or(&labels[0]).to_string();
    if !rho.labels().contains(&ancilla) {
        return Err(CliError::Usage(format!("ancilla `{ancilla}` is not one of {}", rho.labels())));
    }
    let others: Vec<String> = labels.iter().filter(|n| **n != ancilla).cloned().collect();
    if others.is_empty() {
        return Err(CliError::Data("state has no subsystem besides the ancilla".into()));
    }
    let mut partitions = Vec::new();
    for name in &others {
        partitions.push(partition(rho, &ancilla, vec![name.clone()], cfg)?);
    }
    if others.len() > 1 {
        partitions.push(partition(rho, &ancilla, others.clone(), cfg)?);
    }
    let tau = (labels.len() == 3).then(|| {
        let (c_ab, c_ac, c_abc) = (partitions[0].c_cop, partitions[1].c_cop, partitions[2].c_cop);
        TauSummary {
            c_abc,
            c_ab,
            c_ac,
            tau: c_abc - c_ab - c_ac,
        }
    });
    Ok(AnalyzeReport {
        labels,
        ancilla,
        purity: rho.purity(),
        partitions,
        tau,
    })
}

pub fn render_text(report: &AnalyzeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "subsystems: {}   ancilla: {}   purity: {}", report.labels.join(","), report.ancilla, fmt_sig(report.purity));
    let _ = writeln!(s, "{:<12} {:>14} {:>14} {:>14} {:>14} {:>14}", "distill_on", "C_r(rho_X)", "C_CoP", "C_r^{A|X}", "theta", "phi");
    for p in &report.partitions {
        let _ = writeln!(
            s,
            "{:<12} {:>14} {:>14} {:>14} {:>14} {:>14}",
            p.distill_on.join(","),
            fmt_sig(p.unassisted),
            fmt_sig(p.c_cop),
            fmt_sig(p.bound),
            fmt_sig(p.theta),
            fmt_sig(p.phi)
        );
    }
    if let Some(t) = &report.tau {
        let _ = writeln!(
            s,
            "tau = {} (C_abc {} - C_ab {} - C_ac {})",
            fmt_sig(t.tau),
            fmt_sig(t.c_abc),
            fmt_sig(t.c_ab),
            fmt_sig(t.c_ac)
        );
    }
    s
}

pub fn render_json(report: &AnalyzeReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}
