//! Parameter sweeps over the tripartite families, written as versioned CSV.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cohdistill_core::correlations::{correlation_row, DiscordConfig};
use cohdistill_core::distill::tau;
use cohdistill_core::states::make_family;
use cohdistill_core::{Family, FamilyParam, OptimizerConfig, ProjectiveBasis};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::format::{fmt_sig, round_sig};

pub const CSV_VERSION_LINE: &str = "# cohdistill-csv v1";

pub const COLUMNS: [&str; 14] = [
    "p",
    "c_abc",
    "c_ab",
    "c_ac",
    "tau",
    "delta_sef",
    "d3",
    "three_tangle",
    "theta_abc",
    "phi_abc",
    "theta_ab",
    "phi_ab",
    "theta_ac",
    "phi_ac",
];

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub c_abc: f64,
    pub c_ab: f64,
    pub c_ac: f64,
    pub tau: f64,
    pub delta_sef: f64,
    pub d3: f64,
    pub three_tangle: f64,
    pub basis_abc: ProjectiveBasis,
    pub basis_ab: ProjectiveBasis,
    pub basis_ac: ProjectiveBasis,
}

impl SweepRow {
    /// Output fields at ten significant digits. `tau` is recomputed from the printed
    /// components so the written columns stay consistent.
    pub fn fields(&self) -> Vec<String> {
        let tau = round_sig(self.c_abc) - round_sig(self.c_ab) - round_sig(self.c_ac);
        [
            self.p,
            self.c_abc,
            self.c_ab,
            self.c_ac,
            tau,
            self.delta_sef,
            self.d3,
            self.three_tangle,
            self.basis_abc.theta(),
            self.basis_abc.phi(),
            self.basis_ab.theta(),
            self.basis_ab.phi(),
            self.basis_ac.theta(),
            self.basis_ac.phi(),
        ]
        .iter()
        .map(|&v| fmt_sig(v))
        .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub family: Family,
    pub p_start: f64,
    pub p_end: f64,
    pub steps: usize,
    pub ancilla: String,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if !matches!(self.family, Family::WType | Family::GhzType) {
            return Err(CliError::Usage(format!(
                "sweep supports the tripartite families `w` and `ghz`, got `{}`",
                self.family
            )));
        }
        if !(0.0 <= self.p_start && self.p_start <= self.p_end && self.p_end <= 1.0) {
            return Err(CliError::Usage(format!(
                "need 0 ≤ p-start ≤ p-end ≤ 1, got {} and {}",
                self.p_start, self.p_end
            )));
        }
        if self.steps == 0 {
            return Err(CliError::Usage("--steps must be at least 1".into()));
        }
        if !["A", "B", "C"].contains(&self.ancilla.as_str()) {
            return Err(CliError::Usage(format!("ancilla must be A, B or C, got `{}`", self.ancilla)));
        }
        Ok(())
    }

    /// `steps` evenly spaced points; a single step evaluates `p_start` only.
    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.p_start];
        }
        let span = self.p_end - self.p_start;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.p_end
                } else {
                    self.p_start + span * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

pub fn sweep_row(family: Family, p: f64, ancilla: &str, cfg: &OptimizerConfig) -> CliResult<SweepRow> {
    let psi = make_family(&FamilyParam::new(family, p))?;
    let others: Vec<&str> = ["A", "B", "C"].into_iter().filter(|&n| n != ancilla).collect();
    let t = tau(&psi, ancilla, others[0], others[1], cfg)?;
    let corr = correlation_row(&psi, &DiscordConfig::default())?;
    Ok(SweepRow {
        p,
        c_abc: t.c_abc.value,
        c_ab: t.c_ab.value,
        c_ac: t.c_ac.value,
        tau: t.tau,
        delta_sef: corr.delta_sef,
        d3: corr.d3,
        three_tangle: corr.three_tangle,
        basis_abc: t.c_abc.optimal_basis,
        basis_ab: t.c_ab.optimal_basis,
        basis_ac: t.c_ac.optimal_basis,
    })
}

/// Rows in p order; points are evaluated in parallel.
pub fn run_sweep(spec: &SweepSpec, cfg: &OptimizerConfig) -> CliResult<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid()
        .into_par_iter()
        .map(|p| sweep_row(spec.family, p, &spec.ancilla, cfg))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> CliResult<()> {
    writeln!(out, "{CSV_VERSION_LINE}").map_err(|e| CliError::io("<output>", e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))?;
    Ok(())
}

/// Runs the sweep and writes it to `out`, or to standard output when `out` is `None`.
pub fn cmd_sweep(spec: &SweepSpec, cfg: &OptimizerConfig, out: Option<&Path>) -> CliResult<Vec<SweepRow>> {
    spec.validate()?;
    // open the destination first so an unwritable path fails before any computation
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?)),
        None => Box::new(io::stdout().lock()),
    };
    let rows = run_sweep(spec, cfg)?;
    write_csv(&rows, sink).map_err(|e| match (e, out) {
        (CliError::Io { source, .. }, Some(path)) => CliError::io(path, source),
        (e, _) => e,
    })?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(steps: usize) -> SweepSpec {
        SweepSpec {
            family: Family::GhzType,
            p_start: 0.0,
            p_end: 1.0,
            steps,
            ancilla: "A".into(),
        }
    }

    #[test]
    fn grid_points() {
        assert_eq!(spec(1).grid(), vec![0.0]);
        assert_eq!(spec(3).grid(), vec![0.0, 0.5, 1.0]);
        let g = spec(21).grid();
        assert_eq!(g.len(), 21);
        assert_eq!(*g.last().unwrap(), 1.0);
    }

    #[test]
    fn validation() {
        let mut s = spec(0);
        assert!(matches!(s.validate(), Err(CliError::Usage(_))));
        s.steps = 2;
        s.family = Family::Bell;
        assert!(matches!(s.validate(), Err(CliError::Usage(_))));
        s.family = Family::WType;
        s.p_start = 0.8;
        s.p_end = 0.2;
        assert!(matches!(s.validate(), Err(CliError::Usage(_))));
    }

    #[test]
    fn tau_column_consistent_with_components() {
        let row = sweep_row(Family::WType, 0.3, "A", &OptimizerConfig::default()).unwrap();
        let f = row.fields();
        let parse = |i: usize| f[i].parse::<f64>().unwrap();
        assert_eq!(parse(4), round_sig(parse(1) - parse(2) - parse(3)));
    }
}
