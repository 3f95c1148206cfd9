//! Coordinately assisted distillable coherence and the monogamy-type quantities built on it.
//!
//! `C_CoP^{A|X}(ρ) = max_{Ξ} Σ_i P_i C_r(ρ_X^i)`: the best average relative entropy of
//! coherence left on `X` after a projective measurement of the ancilla `A`.

use serde::Serialize;

use crate::coherence::{diagonal_entropy, matrix_entropy, qi_relative_entropy};
use crate::densmat::{partial_trace_positions, ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::measure::{ancilla_blocks, contract_blocks, ProjectiveBasis, DEGENERATE_PROBABILITY};
use crate::optimize::{maximize, SearchSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub n_theta: usize,
    pub n_phi: usize,
    pub refine_iterations: usize,
    pub refine_shrink: f64,
    pub tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            n_theta: 91,
            n_phi: 73,
            refine_iterations: 40,
            refine_shrink: 0.5,
            tolerance: 1e-6,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!("tolerance {} must be positive", self.tolerance)));
        }
        self.search_spec().validate()
    }

    pub(crate) fn search_spec(&self) -> SearchSpec {
        SearchSpec {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            refine_iterations: self.refine_iterations,
            refine_shrink: self.refine_shrink,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistillReport {
    pub value: f64,
    pub optimal_basis: ProjectiveBasis,
    pub objective_trace: Vec<(ProjectiveBasis, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauReport {
    pub c_abc: DistillReport,
    pub c_ab: DistillReport,
    pub c_ac: DistillReport,
    pub tau: f64,
}

/// Precomputed ancilla blocks for fast evaluation of the average residual coherence.
///
/// The state is first reduced to the ancilla plus every qubit appearing in `groups`;
/// each group's residual coherence is summed per outcome.
pub struct AssistedObjective {
    blocks: [[ComplexMatrix; 2]; 2],
    rest_qubits: usize,
    /// Positions (within the post-measurement register) of each distilled group.
    groups: Vec<Vec<usize>>,
}

impl AssistedObjective {
    pub fn new<S: AsRef<str>>(rho: &DensityMatrix, ancilla: &str, groups: &[Vec<S>]) -> Result<Self> {
        let labels = rho.labels();
        let anc = labels.position(ancilla)?;
        if groups.is_empty() || groups.iter().any(|g| g.is_empty()) {
            return Err(Error::InvalidPartition("empty distillation target".into()));
        }
        let mut involved = vec![anc];
        for g in groups {
            for name in g {
                let name = name.as_ref();
                if name == ancilla {
                    return Err(Error::InvalidPartition(format!(
                        "ancilla `{ancilla}` cannot also be distilled"
                    )));
                }
                involved.push(labels.position(name)?);
            }
        }
        involved.sort_unstable();
        involved.dedup();
        let reduced = partial_trace_positions(rho.matrix(), labels.len(), &involved);
        let anc_local = involved.iter().position(|&p| p == anc).expect("ancilla kept");
        let rest: Vec<usize> = involved.iter().copied().filter(|&p| p != anc).collect();
        let groups = groups
            .iter()
            .map(|g| {
                let mut pos: Vec<usize> = g
                    .iter()
                    .map(|n| {
                        let p = labels.position(n.as_ref()).expect("validated above");
                        rest.iter().position(|&r| r == p).expect("group member kept")
                    })
                    .collect();
                pos.sort_unstable();
                pos.dedup();
                pos
            })
            .collect();
        Ok(Self {
            blocks: ancilla_blocks(&reduced, involved.len(), anc_local),
            rest_qubits: rest.len(),
            groups,
        })
    }

    pub fn evaluate(&self, basis: &ProjectiveBasis) -> Result<f64> {
        let mut total = 0.0;
        for v in basis.vectors() {
            let m = contract_blocks(&self.blocks, &v);
            let p = m.trace().re;
            if p < DEGENERATE_PROBABILITY {
                continue;
            }
            // P · C_r(M/P) = S(Δ(M/P))·P − S(M/P)·P
            let residual = m.scale(1.0 / p);
            for g in &self.groups {
                let part = if g.len() == self.rest_qubits {
                    residual.clone()
                } else {
                    partial_trace_positions(&residual, self.rest_qubits, g)
                };
                total += p * (diagonal_entropy(&part)? - matrix_entropy(&part)?);
            }
        }
        Ok(total)
    }
}

fn run(objective: &AssistedObjective, cfg: &OptimizerConfig) -> Result<DistillReport> {
    cfg.validate()?;
    let res = maximize(1, &cfg.search_spec(), |b| objective.evaluate(&b[0]))?;
    Ok(DistillReport {
        value: res.value,
        optimal_basis: res.bases[0],
        objective_trace: res.trace.into_iter().map(|(b, v)| (b[0], v)).collect(),
    })
}

/// `C_CoP^{ancilla | distill_on}`.
pub fn c_cop<S: AsRef<str>>(
    rho: &DensityMatrix,
    ancilla: &str,
    distill_on: &[S],
    cfg: &OptimizerConfig,
) -> Result<DistillReport> {
    if distill_on.is_empty() {
        return Err(Error::InvalidPartition("nothing to distill on".into()));
    }
    let group: Vec<&str> = distill_on.iter().map(AsRef::as_ref).collect();
    let objective = AssistedObjective::new(rho, ancilla, &[group])?;
    run(&objective, cfg)
}

/// Distribution core `τ = C^{A|BC} − C^{A|B} − C^{A|C}` from three independent optimizations.
pub fn tau(
    rho: &DensityMatrix,
    ancilla: &str,
    part1: &str,
    part2: &str,
    cfg: &OptimizerConfig,
) -> Result<TauReport> {
    if ancilla == part1 || ancilla == part2 || part1 == part2 {
        return Err(Error::InvalidPartition(format!(
            "labels `{ancilla}`, `{part1}`, `{part2}` must be distinct"
        )));
    }
    let c_abc = c_cop(rho, ancilla, &[part1, part2], cfg)?;
    let c_ab = c_cop(rho, ancilla, &[part1], cfg)?;
    let c_ac = c_cop(rho, ancilla, &[part2], cfg)?;
    let tau = c_abc.value - c_ab.value - c_ac.value;
    Ok(TauReport { c_abc, c_ab, c_ac, tau })
}

/// `min(τ_A, τ_B, τ_C)` with each subsystem of a three-qubit state as the ancilla.
pub fn tau_symmetrized(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    let names = rho.labels().names();
    if names.len() != 3 {
        return Err(Error::InvalidPartition(format!(
            "symmetrized τ needs three subsystems, got {}",
            names.len()
        )));
    }
    let mut best = f64::INFINITY;
    for a in 0..3 {
        let others: Vec<&str> = (0..3).filter(|&i| i != a).map(|i| names[i].as_str()).collect();
        let t = tau(rho, &names[a], others[0], others[1], cfg)?.tau;
        best = best.min(t);
    }
    Ok(best)
}

/// `max_Ξ Σ_i P_i Σ_α C_r(ρ_{B_α}^i)` with one shared measurement of the ancilla.
pub fn theorem3_objective(
    rho: &DensityMatrix,
    ancilla: &str,
    cfg: &OptimizerConfig,
) -> Result<(f64, ProjectiveBasis)> {
    let others = non_ancilla(rho, ancilla)?;
    if others.len() < 2 {
        return Err(Error::InvalidPartition("need at least two non-ancilla subsystems".into()));
    }
    let groups: Vec<Vec<&str>> = others.iter().map(|n| vec![n.as_str()]).collect();
    let objective = AssistedObjective::new(rho, ancilla, &groups)?;
    let report = run(&objective, cfg)?;
    Ok((report.value, report.optimal_basis))
}

fn non_ancilla(rho: &DensityMatrix, ancilla: &str) -> Result<Vec<String>> {
    rho.labels().position(ancilla)?;
    Ok(rho
        .labels()
        .names()
        .iter()
        .filter(|n| n.as_str() != ancilla)
        .cloned()
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    /// `C_CoP^{A|B₁…B_N}`.
    pub lhs: f64,
    /// `(B_α, C_CoP^{A|B_α})`, each from its own optimization.
    pub rhs_terms: Vec<(String, f64)>,
    /// `lhs − Σ rhs`.
    pub slack: f64,
    /// Whether the inequality is asserted (precondition flagged and the state is pure).
    pub asserted: bool,
    /// `Some(true/false)` when asserted.
    pub holds: Option<bool>,
    pub warnings: Vec<String>,
}

/// Evaluates `C^{A|B₁…B_N} ≥ Σ_α C^{A|B_α}`. The inequality is only asserted when the caller
/// flags the Schmidt-form precondition and the state is pure.
pub fn multipartite_inequality_check(
    rho: &DensityMatrix,
    ancilla: &str,
    schmidt_form: bool,
    cfg: &OptimizerConfig,
) -> Result<InequalityReport> {
    let others = non_ancilla(rho, ancilla)?;
    if others.is_empty() {
        return Err(Error::InvalidPartition("no subsystem besides the ancilla".into()));
    }
    let lhs = c_cop(rho, ancilla, &others, cfg)?.value;
    let rhs_terms = others
        .iter()
        .map(|n| Ok((n.clone(), c_cop(rho, ancilla, &[n.as_str()], cfg)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let slack = lhs - rhs_terms.iter().map(|(_, v)| v).sum::<f64>();

    let mut warnings = Vec::new();
    let purity = rho.purity();
    let pure = purity >= 1.0 - 1e-9;
    if schmidt_form && !pure {
        warnings.push(format!(
            "PreconditionViolation: state is mixed (purity {purity:.9}); inequality not asserted"
        ));
    }
    let asserted = schmidt_form && pure;
    Ok(InequalityReport {
        lhs,
        rhs_terms,
        slack,
        asserted,
        holds: asserted.then_some(slack >= -cfg.tolerance),
        warnings,
    })
}

/// Upper bound `C_r^{A|X}(ρ_AX)` of the assisted distillable coherence.
pub fn qi_bound<S: AsRef<str>>(rho: &DensityMatrix, ancilla: &str, distill_on: &[S]) -> Result<f64> {
    let mut keep: Vec<&str> = vec![ancilla];
    keep.extend(distill_on.iter().map(AsRef::as_ref));
    let reduced = rho.partial_trace(&keep)?;
    qi_relative_entropy(&reduced, distill_on)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{binary_entropy, dephase, von_neumann_entropy};
    use crate::densmat::{SystemLabel, C64};
    use crate::measure::average_coherence;
    use crate::states::{make_family, random_density, random_pure, Family, FamilyParam};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    fn family(f: Family, p: f64) -> DensityMatrix {
        make_family(&FamilyParam::new(f, p)).unwrap()
    }

    #[test]
    fn objective_matches_generic_path() {
        for seed in 0..20 {
            let rho = random_density(3, 1 + (seed as usize % 8), seed).unwrap();
            let basis = ProjectiveBasis::new(0.1 + 0.07 * seed as f64, 0.3 * seed as f64).unwrap();
            for (anc, on) in [("A", vec!["B", "C"]), ("B", vec!["C"]), ("C", vec!["A"])] {
                let fast = AssistedObjective::new(&rho, anc, std::slice::from_ref(&on)).unwrap().evaluate(&basis).unwrap();
                let slow = average_coherence(&rho, anc, &basis, &on).unwrap();
                assert!((fast - slow).abs() < 1e-12, "seed {seed}");
            }
        }
    }

    #[test]
    fn pure_bipartite_equals_dephased_marginal_entropy() {
        for seed in 0..5 {
            let psi = random_pure(2, seed).unwrap();
            let rb = psi.partial_trace(&["B"]).unwrap();
            let target = von_neumann_entropy(&dephase(&rb, &["B"]).unwrap()).unwrap();
            let r = c_cop(&psi, "A", &["B"], &cfg()).unwrap();
            assert!((r.value - target).abs() < 1e-6, "seed {seed}: {} vs {target}", r.value);
        }
    }

    #[test]
    fn ghz_family_on_c_uses_computational_basis() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let r = c_cop(&family(Family::GhzType, p), "A", &["C"], &cfg()).unwrap();
            assert!((r.value - 0.5 * binary_entropy(p).unwrap()).abs() < 1e-9, "p={p}");
            assert!(r.optimal_basis.theta() < 1e-9);
        }
    }

    #[test]
    fn w_state_on_bc() {
        let r = c_cop(&family(Family::WType, 0.5), "A", &["B", "C"], &cfg()).unwrap();
        assert!((r.value - 3f64.log2()).abs() < 1e-9);
        assert!((r.optimal_basis.theta() - FRAC_PI_4).abs() < 1e-6);
        assert!(r.optimal_basis.phi().abs() < 1e-6);
        assert!(!r.objective_trace.is_empty());
    }

    #[test]
    fn tau_examples() {
        let t1 = tau(&family(Family::GhzType, 1.0), "A", "B", "C", &cfg()).unwrap();
        assert!((t1.tau - 1.0).abs() < 1e-9);
        let t0 = tau(&family(Family::GhzType, 0.0), "A", "B", "C", &cfg()).unwrap();
        assert!(t0.tau.abs() < 1e-9);
        let tw = tau(&family(Family::WType, 0.5), "A", "B", "C", &cfg()).unwrap();
        assert!((tw.tau - 0.848).abs() < 5e-3);
        assert_eq!(tw.tau, tw.c_abc.value - tw.c_ab.value - tw.c_ac.value);
        assert!(matches!(tau(&family(Family::WType, 0.5), "A", "A", "C", &cfg()), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn symmetrized_tau() {
        let w = family(Family::WType, 0.5);
        let t = tau(&w, "A", "B", "C", &cfg()).unwrap().tau;
        assert!((tau_symmetrized(&w, &cfg()).unwrap() - t).abs() < 1e-9);

        let a = random_density(1, 2, 5).unwrap();
        let b = DensityMatrix::new(random_density(1, 2, 6).unwrap().matrix().clone(), SystemLabel::new(["B"]).unwrap()).unwrap();
        let c = DensityMatrix::new(random_density(1, 2, 7).unwrap().matrix().clone(), SystemLabel::new(["C"]).unwrap()).unwrap();
        let prod = a.tensor(&b).unwrap().tensor(&c).unwrap();
        assert!(tau_symmetrized(&prod, &cfg()).unwrap().abs() < 1e-6);

        let ghz = family(Family::GhzType, 1.0);
        let per_ancilla: Vec<f64> = [("A", "B", "C"), ("B", "A", "C"), ("C", "A", "B")]
            .iter()
            .map(|(x, y, z)| tau(&ghz, x, y, z, &cfg()).unwrap().tau)
            .collect();
        let expected = per_ancilla.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(tau_symmetrized(&ghz, &cfg()).unwrap(), expected);
    }

    #[test]
    fn shared_measurement_examples() {
        // ρ_AB ⊗ ρ_C with ρ_C incoherent: the C term vanishes identically
        let ab = random_density(2, 2, 11).unwrap();
        let c = DensityMatrix::new(crate::densmat::ComplexMatrix::diag(&[0.3, 0.7]), SystemLabel::new(["C"]).unwrap()).unwrap();
        let prod = ab.tensor(&c).unwrap();
        let (v, _) = theorem3_objective(&prod, "A", &cfg()).unwrap();
        let single = c_cop(&ab, "A", &["B"], &cfg()).unwrap().value;
        assert!((v - single).abs() < 1e-9);

        let w = family(Family::WType, 0.5);
        let (v, basis) = theorem3_objective(&w, "A", &cfg()).unwrap();
        let single = average_coherence(&w, "A", &ProjectiveBasis::hadamard(), &["B"]).unwrap();
        assert!((v - 2.0 * single).abs() < 1e-9);
        assert!((v - 0.7366).abs() < 1e-3);
        assert!((basis.theta() - FRAC_PI_4).abs() < 1e-6);
        assert!(v <= c_cop(&w, "A", &["B", "C"], &cfg()).unwrap().value + 1e-6);
    }

    #[test]
    fn four_qubit_ghz_inequality() {
        let ghz4 = make_family(&FamilyParam::with_qubits(Family::GhzN, 4)).unwrap();
        let rep = multipartite_inequality_check(&ghz4, "A", true, &cfg()).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-9);
        for (_, v) in &rep.rhs_terms {
            assert!(v.abs() < 1e-9);
        }
        assert!((rep.slack - 1.0).abs() < 1e-9);
        assert_eq!(rep.holds, Some(true));
    }

    #[test]
    fn biseparable_equality_and_w_slack() {
        let bell = make_family(&FamilyParam::new(Family::Bell, 0.0)).unwrap();
        let c = DensityMatrix::pure(&[C64::new(0.6, 0.0), C64::new(0.8, 0.0)], SystemLabel::new(["C"]).unwrap()).unwrap();
        let state = bell.tensor(&c).unwrap();
        let rep = multipartite_inequality_check(&state, "A", true, &cfg()).unwrap();
        assert!(rep.slack.abs() <= 1e-6, "slack {}", rep.slack);

        let w = family(Family::WType, 0.5);
        let rep = multipartite_inequality_check(&w, "A", true, &cfg()).unwrap();
        assert!((rep.slack - 0.848).abs() < 5e-3);
    }

    #[test]
    fn mixed_input_with_flag_warns() {
        let rho = random_density(3, 4, 3).unwrap();
        let rep = multipartite_inequality_check(&rho, "A", true, &cfg()).unwrap();
        assert!(!rep.asserted);
        assert_eq!(rep.holds, None);
        assert!(rep.warnings[0].starts_with("PreconditionViolation"));
    }

    #[test]
    fn bound_chain_and_range() {
        for seed in 0..10 {
            let rho = random_density(3, 1 + seed as usize % 8, 100 + seed).unwrap();
            for on in [vec!["B"], vec!["B", "C"]] {
                let r = c_cop(&rho, "A", &on, &cfg()).unwrap();
                assert!(r.value >= -1e-9 && r.value <= on.len() as f64 + 1e-9);
                assert!(r.value <= qi_bound(&rho, "A", &on).unwrap() + 1e-6);
            }
        }
    }

    #[test]
    fn real_states_pick_phi_zero_or_pi() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            for f in [Family::WType, Family::GhzType] {
                for on in [vec!["B"], vec!["C"], vec!["B", "C"]] {
                    let r = c_cop(&family(f, p), "A", &on, &cfg()).unwrap();
                    let phi = r.optimal_basis.phi();
                    let off = phi.min((phi - PI).abs()).min(2.0 * PI - phi);
                    assert!(off < 1e-6, "{f:?} p={p} {on:?} phi={phi}");
                }
            }
        }
    }

    #[test]
    fn argument_errors() {
        let w = family(Family::WType, 0.5);
        let empty: [&str; 0] = [];
        assert!(matches!(c_cop(&w, "A", &empty, &cfg()), Err(Error::InvalidPartition(_))));
        assert!(matches!(c_cop(&w, "A", &["A"], &cfg()), Err(Error::InvalidPartition(_))));
        assert!(matches!(c_cop(&w, "Z", &["B"], &cfg()), Err(Error::LabelNotFound(_))));
        let bad = OptimizerConfig { tolerance: 0.0, ..cfg() };
        assert!(matches!(c_cop(&w, "A", &["B"], &bad), Err(Error::InvalidConfig(_))));
        let bell = make_family(&FamilyParam::new(Family::Bell, 0.0)).unwrap();
        assert!(matches!(theorem3_objective(&bell, "A", &cfg()), Err(Error::InvalidPartition(_))));
    }
}
