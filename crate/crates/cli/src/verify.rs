//! Seeded property-verification suites over the core invariants.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::str::FromStr;

use cohdistill_core::coherence::{
    conditional_entropy, dephase, qi_relative_entropy, relative_entropy_coherence,
};
use cohdistill_core::correlations::{
    concurrence, formation_from_concurrence, three_tangle, tripartite_discord, tripartite_discord_pure_shortcut,
    DiscordConfig,
};
use cohdistill_core::distill::{c_cop, multipartite_inequality_check, qi_bound, tau, theorem3_objective, AssistedObjective};
use cohdistill_core::measure::{apply_measurement, residual_closed_form_ghz};
use cohdistill_core::states::{make_family, random_density, random_pure};
use cohdistill_core::{DensityMatrix, Family, FamilyParam, OptimizerConfig, ProjectiveBasis, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::format::fmt_sig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Entropy,
    Measurement,
    Monogamy,
    Correlations,
    Oracle,
    All,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "entropy" => Self::Entropy,
            "measurement" => Self::Measurement,
            "monogamy" => Self::Monogamy,
            "correlations" => Self::Correlations,
            "oracle" => Self::Oracle,
            "all" => Self::All,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown suite `{other}` (expected entropy, measurement, monogamy, correlations, oracle or all)"
                )))
            }
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub property: String,
    pub trials: usize,
    pub failures: usize,
    /// Smallest margin seen; negative margins are failures.
    pub worst_slack: f64,
    pub seed: u64,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Accumulates per-trial margins for one property.
struct Tally {
    property: &'static str,
    seed: u64,
    slacks: Vec<f64>,
}

impl Tally {
    fn new(property: &'static str, seed: u64) -> Self {
        Self {
            property,
            seed,
            slacks: Vec::new(),
        }
    }

    fn record(&mut self, slack: f64) {
        // NaN counts as a failure
        self.slacks.push(if slack.is_nan() { f64::NEG_INFINITY } else { slack });
    }

    fn finish(self) -> VerifyOutcome {
        VerifyOutcome {
            property: self.property.into(),
            trials: self.slacks.len(),
            failures: self.slacks.iter().filter(|&&s| s < 0.0).count(),
            worst_slack: self.slacks.iter().copied().fold(f64::INFINITY, f64::min),
            seed: self.seed,
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn family(f: Family, p: f64) -> CliResult<DensityMatrix> {
    Ok(make_family(&FamilyParam::new(f, p))?)
}

fn p_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

fn random_basis(rng: &mut ChaCha8Rng) -> ProjectiveBasis {
    ProjectiveBasis::normalized(rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * 2.0 * PI)
}

pub fn entropy_suite(trials: usize, seed: u64) -> CliResult<Vec<VerifyOutcome>> {
    let mut rng = rng_for(seed, 1);
    let mut superadd = Tally::new("entropy/superadditivity", seed);
    let mut extension = Tally::new("entropy/subsystem-extension", seed);
    let mut conditional = Tally::new("entropy/dephased-conditional", seed);
    let mut idempotent = Tally::new("entropy/dephase-idempotent", seed);
    for _ in 0..trials {
        let rho2 = random_density(2, rng.random_range(1..=4), rng.random())?;
        let whole = relative_entropy_coherence(&rho2)?;
        let a = relative_entropy_coherence(&rho2.partial_trace(&["A"])?)?;
        let b = relative_entropy_coherence(&rho2.partial_trace(&["B"])?)?;
        superadd.record(whole - a - b + 1e-9);

        let rho3 = random_density(3, rng.random_range(1..=8), rng.random())?;
        let full = qi_relative_entropy(&rho3, &["C"])?;
        let reduced = qi_relative_entropy(&rho3.partial_trace(&["A", "C"])?, &["C"])?;
        extension.record(full - reduced + 1e-9);

        let both = conditional_entropy(&dephase(&rho3, &["B", "C"])?, &["A", "B"])?;
        let only_c = conditional_entropy(&dephase(&rho3, &["C"])?, &["A", "B"])?;
        conditional.record(both - only_c + 1e-9);

        let once = dephase(&rho3, &["B", "C"])?;
        let twice = dephase(&once, &["B", "C"])?;
        let trace_err = (once.matrix().trace() - rho3.matrix().trace()).norm();
        idempotent.record(1e-12 - once.matrix().max_abs_diff(twice.matrix()).max(trace_err));
    }
    Ok(vec![superadd.finish(), extension.finish(), conditional.finish(), idempotent.finish()])
}

pub fn measurement_suite(trials: usize, seed: u64) -> CliResult<Vec<VerifyOutcome>> {
    let mut rng = rng_for(seed, 2);
    let mut complete = Tally::new("measurement/completeness", seed);
    let mut basis = Tally::new("measurement/basis-invariants", seed);
    for _ in 0..trials {
        let n = rng.random_range(2..=3);
        let rho = random_density(n, rng.random_range(1..=(1 << n)), rng.random())?;
        let names = rho.labels().names().to_vec();
        let target = &names[rng.random_range(0..n)];
        let b = random_basis(&mut rng);
        let ens = apply_measurement(&rho, target, &b)?;
        let mut err = (ens.total_probability() - 1.0).abs();
        if let Some(mix) = ens.mixture() {
            err = err.max(mix.max_abs_diff(rho.trace_out(&[target.as_str()])?.matrix()));
        }
        complete.record(1e-9 - err);

        let [u, v] = b.vectors();
        let dot = |x: &[C64; 2], y: &[C64; 2]| x[0].conj() * y[0] + x[1].conj() * y[1];
        let [p0, p1] = b.projectors();
        let sum = &p0 + &p1;
        let id = cohdistill_core::ComplexMatrix::identity(2);
        let defect = (dot(&u, &u) - 1.0)
            .norm()
            .max((dot(&v, &v) - 1.0).norm())
            .max(dot(&u, &v).norm())
            .max(sum.max_abs_diff(&id))
            .max(p0.matmul(&p0).max_abs_diff(&p0));
        basis.record(1e-12 - defect);
    }

    let mut closed = Tally::new("measurement/closed-form-ghz", seed);
    for i in 0..20 {
        let p = i as f64 / 19.0;
        let psi = family(Family::GhzType, p)?;
        for j in 0..20 {
            let theta = FRAC_PI_2 * j as f64 / 19.0;
            let (plus, minus) = residual_closed_form_ghz(p, theta)?;
            let ens = apply_measurement(&psi, "A", &ProjectiveBasis::new(theta, 0.0)?)?;
            let mut worst: f64 = 0.0;
            for (outcome, expected) in ens.outcomes.iter().zip([plus, minus]) {
                worst = worst.max((outcome.probability - 0.5).abs());
                if let Some(res) = &outcome.residual {
                    let c = res.partial_trace(&["C"])?;
                    worst = worst.max(c.matrix().max_abs_diff(expected.matrix()));
                }
            }
            closed.record(1e-10 - worst);
        }
    }
    Ok(vec![complete.finish(), basis.finish(), closed.finish()])
}

pub fn monogamy_suite(trials: usize, seed: u64, cfg: &OptimizerConfig) -> CliResult<Vec<VerifyOutcome>> {
    let mut families = Tally::new("monogamy/tau-nonnegative-families", seed);
    let mut n_party = Tally::new("monogamy/n-party-families", seed);
    for f in [Family::WType, Family::GhzType] {
        for p in p_grid() {
            let psi = family(f, p)?;
            families.record(tau(&psi, "A", "B", "C", cfg)?.tau + 1e-6);
            let rep = multipartite_inequality_check(&psi, "A", true, cfg)?;
            n_party.record(rep.slack + cfg.tolerance);
        }
    }
    let mut rng = rng_for(seed, 3);
    let mut shared = Tally::new("monogamy/shared-measurement-bound", seed);
    let mut chain = Tally::new("monogamy/bound-chain", seed);
    for _ in 0..trials {
        let rho = random_density(3, rng.random_range(1..=8), rng.random())?;
        let (objective, _) = theorem3_objective(&rho, "A", cfg)?;
        let joint = c_cop(&rho, "A", &["B", "C"], cfg)?.value;
        shared.record(joint + 1e-6 - objective);
        let bound = qi_bound(&rho, "A", &["B", "C"])?;
        let bare = relative_entropy_coherence(&rho.partial_trace(&["B", "C"])?)?;
        chain.record((bound + 1e-6 - joint).min(joint - bare + 1e-9));
    }
    Ok(vec![families.finish(), n_party.finish(), shared.finish(), chain.finish()])
}

pub fn correlations_suite(trials: usize, seed: u64, cfg: &OptimizerConfig) -> CliResult<Vec<VerifyOutcome>> {
    let mut rng = rng_for(seed, 4);
    let mut range = Tally::new("correlations/concurrence-range", seed);
    let mut tangle = Tally::new("correlations/three-tangle-range", seed);
    for _ in 0..trials {
        let rho = random_density(2, rng.random_range(1..=4), rng.random())?;
        let c = concurrence(&rho)?;
        range.record(c.min(1.0 - c));
        let psi = random_pure(3, rng.random())?;
        let t = three_tangle(&psi)?;
        tangle.record((t + 1e-6).min(1.0 + 1e-9 - t));
    }

    let mut formation = Tally::new("correlations/formation-monotone", seed);
    let mut prev = formation_from_concurrence(0.0)?;
    for i in 1..=100 {
        let e = formation_from_concurrence(i as f64 / 100.0)?;
        formation.record(e - prev);
        prev = e;
    }

    let dcfg = DiscordConfig::default();
    let mut monotone = Tally::new("correlations/ghz-d3-monotone", seed);
    let mut coincide = Tally::new("correlations/ghz-tau-d3-coincidence", seed);
    let mut w_tangle = Tally::new("correlations/w-three-tangle-zero", seed);
    let mut prev_d3: Option<f64> = None;
    for p in p_grid() {
        let psi = family(Family::GhzType, p)?;
        let d3 = tripartite_discord_pure_shortcut(&psi)?;
        if let Some(before) = prev_d3 {
            monotone.record(d3 - before + 1e-3);
        }
        prev_d3 = Some(d3);
        let t = tau(&psi, "A", "B", "C", cfg)?.tau;
        coincide.record(2e-2 - (t - d3).abs());
        w_tangle.record(1e-6 - three_tangle(&family(Family::WType, p)?)?.abs());
    }

    let mut shortcut = Tally::new("correlations/shortcut-vs-full", seed);
    for f in [Family::WType, Family::GhzType] {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let psi = family(f, p)?;
            let short = tripartite_discord_pure_shortcut(&psi)?;
            let full = tripartite_discord(&psi, &dcfg)?;
            shortcut.record(2e-2 - (short - full).abs());
        }
    }
    Ok(vec![
        range.finish(),
        tangle.finish(),
        formation.finish(),
        monotone.finish(),
        coincide.finish(),
        w_tangle.finish(),
        shortcut.finish(),
    ])
}

pub const ORACLE_GRID: (usize, usize) = (361, 721);

/// Exhaustive evaluation of the assisted objective on a fixed `(θ, φ)` grid.
pub fn grid_oracle(objective: &AssistedObjective, n_theta: usize, n_phi: usize) -> CliResult<f64> {
    let best = (0..n_theta * n_phi)
        .into_par_iter()
        .map(|k| {
            let theta = FRAC_PI_2 * (k / n_phi) as f64 / (n_theta - 1) as f64;
            let phi = 2.0 * PI * (k % n_phi) as f64 / n_phi as f64;
            objective.evaluate(&ProjectiveBasis::normalized(theta, phi))
        })
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))?;
    Ok(best)
}

/// Compares the optimizer against the exhaustive grid. The two sides are tallied separately:
/// the optimizer must never fall below the grid, and must not exceed it by more than the
/// tolerance. The second side also absorbs the grid's own discretization error.
pub fn oracle_suite(trials: usize, seed: u64, cfg: &OptimizerConfig) -> CliResult<Vec<VerifyOutcome>> {
    let mut rng = rng_for(seed, 5);
    let mut below = Tally::new("oracle/not-below-grid", seed);
    let mut above = Tally::new("oracle/within-tolerance-above-grid", seed);
    for trial in 0..trials {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let rho = random_density(n, rng.random_range(1..=(1 << n)), rng.random())?;
        let targets: Vec<&str> = if n == 2 { vec!["B"] } else { vec!["B", "C"] };
        let found = c_cop(&rho, "A", &targets, cfg)?.value;
        let objective = AssistedObjective::new(&rho, "A", &[targets])?;
        let oracle = grid_oracle(&objective, ORACLE_GRID.0, ORACLE_GRID.1)?;
        below.record(found - (oracle - 1e-6));
        above.record(oracle + cfg.tolerance - found);
    }
    Ok(vec![below.finish(), above.finish()])
}

pub fn cmd_verify(suite: Suite, trials: usize, seed: u64, cfg: &OptimizerConfig) -> CliResult<Vec<VerifyOutcome>> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Entropy {
        out.extend(entropy_suite(trials, seed)?);
    }
    if all || suite == Suite::Measurement {
        out.extend(measurement_suite(trials, seed)?);
    }
    if all || suite == Suite::Monogamy {
        out.extend(monogamy_suite(trials, seed, cfg)?);
    }
    if all || suite == Suite::Correlations {
        out.extend(correlations_suite(trials, seed, cfg)?);
    }
    if all || suite == Suite::Oracle {
        out.extend(oracle_suite(trials, seed, cfg)?);
    }
    Ok(out)
}

pub fn render_table(outcomes: &[VerifyOutcome]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<42} {:>7} {:>8} {:>16} {:>10}  status", "property", "trials", "failures", "worst_slack", "seed");
    for o in outcomes {
        let _ = writeln!(
            s,
            "{:<42} {:>7} {:>8} {:>16} {:>10}  {}",
            o.property,
            o.trials,
            o.failures,
            fmt_sig(o.worst_slack),
            o.seed,
            if o.passed() { "PASS" } else { "FAIL" }
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!(matches!("bogus".parse::<Suite>(), Err(CliError::Usage(_))));
    }

    #[test]
    fn entropy_suite_is_deterministic() {
        let a = entropy_suite(20, 3).unwrap();
        let b = entropy_suite(20, 3).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.worst_slack.to_bits(), y.worst_slack.to_bits());
            assert!(x.passed(), "{x:?}");
        }
    }

    #[test]
    fn measurement_suite_passes() {
        for o in measurement_suite(20, 1).unwrap() {
            assert!(o.passed(), "{o:?}");
        }
    }
}
