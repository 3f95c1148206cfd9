//! Bipartite entanglement and genuine tripartite correlation measures: concurrence,
//! entanglement of formation, `Δ_SEF`, three-tangle, mutual information, measured
//! conditional entropy and the genuine tripartite discord `D^(3)`.
//!
//! Conditional-entropy minimizations run over rank-1 product projective measurements
//! (two angles per measured qubit), using the same grid-then-pattern-search optimizer
//! as the distillation layer.

use std::collections::HashMap;

use serde::Serialize;

use crate::coherence::{binary_entropy, matrix_entropy, von_neumann_entropy, Spectrum};
use crate::densmat::{eig_hermitian, ComplexMatrix, DensityMatrix, C64};
use crate::error::{Error, Result};
use crate::measure::DEGENERATE_PROBABILITY;
use crate::optimize::{minimize, SearchSpec};

const PURITY_TOL: f64 = 1e-9;
/// Slack used when comparing mutual informations for the pure-state ordering.
const ORDERING_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscordConfig {
    pub n_theta: usize,
    pub n_phi: usize,
    pub refine_iterations: usize,
}

impl Default for DiscordConfig {
    fn default() -> Self {
        Self {
            n_theta: 9,
            n_phi: 8,
            refine_iterations: 30,
        }
    }
}

impl DiscordConfig {
    fn search_spec(&self) -> SearchSpec {
        SearchSpec {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            refine_iterations: self.refine_iterations,
            refine_shrink: 0.5,
        }
    }
}

fn require_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.n_qubits() != n {
        return Err(Error::DimensionError {
            expected: 1 << n,
            got: rho.dim(),
        });
    }
    Ok(())
}

fn require_pure(rho: &DensityMatrix) -> Result<()> {
    let purity = rho.purity();
    if purity < 1.0 - PURITY_TOL {
        return Err(Error::PurityRequired(purity));
    }
    Ok(())
}

/// Two-qubit concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, where `λ` are the descending square
/// roots of the spectrum of `√ρ ρ̃ √ρ` and `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_qubits(rho, 2)?;
    let m = rho.matrix();
    // σ_y ⊗ σ_y is real: anti-diagonal (−1, 1, 1, −1)
    let mut flip = ComplexMatrix::zeros(4);
    flip[(0, 3)] = C64::new(-1.0, 0.0);
    flip[(1, 2)] = C64::new(1.0, 0.0);
    flip[(2, 1)] = C64::new(1.0, 0.0);
    flip[(3, 0)] = C64::new(-1.0, 0.0);
    let tilde = flip.matmul(&m.conj()).matmul(&flip);

    let e = eig_hermitian(m)?;
    let mut sqrt_rho = ComplexMatrix::zeros(4);
    for (k, &l) in e.values.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        let v = e.vector(k);
        for r in 0..4 {
            for c in 0..4 {
                sqrt_rho[(r, c)] += v[r] * v[c].conj() * s;
            }
        }
    }
    let inner = sqrt_rho.matmul(&tilde).matmul(&sqrt_rho).hermitian_part();
    let mu = eig_hermitian(&inner)?.values;
    let lambda: Vec<f64> = mu.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).clamp(0.0, 1.0))
}

/// Entanglement of formation from a concurrence value.
pub fn formation_from_concurrence(c: f64) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&c) {
        return Err(Error::DomainError(format!("concurrence {c} outside [0, 1]")));
    }
    let c = c.min(1.0);
    binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0)
}

/// Two-qubit entanglement of formation `H((1 + √(1 − C²))/2)`.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    formation_from_concurrence(concurrence(rho)?)
}

fn name(rho: &DensityMatrix, i: usize) -> &str {
    &rho.labels().names()[i]
}

/// `S²(ρ_A) − E_f²(ρ_AB) − E_f²(ρ_AC)` for a pure three-qubit state (first label is A).
pub fn delta_sef(psi: &DensityMatrix) -> Result<f64> {
    require_qubits(psi, 3)?;
    require_pure(psi)?;
    let (a, b, c) = (name(psi, 0), name(psi, 1), name(psi, 2));
    let s_a = von_neumann_entropy(&psi.partial_trace(&[a])?)?;
    let e_ab = entanglement_of_formation(&psi.partial_trace(&[a, b])?)?;
    let e_ac = entanglement_of_formation(&psi.partial_trace(&[a, c])?)?;
    Ok(s_a * s_a - e_ab * e_ab - e_ac * e_ac)
}

/// `4 det ρ_A − C²_AB − C²_AC` for a pure three-qubit state.
pub fn three_tangle(psi: &DensityMatrix) -> Result<f64> {
    require_qubits(psi, 3)?;
    require_pure(psi)?;
    let (a, b, c) = (name(psi, 0), name(psi, 1), name(psi, 2));
    let rho_a = psi.partial_trace(&[a])?;
    let m = rho_a.matrix();
    let det = m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr();
    let c_ab = concurrence(&psi.partial_trace(&[a, b])?)?;
    let c_ac = concurrence(&psi.partial_trace(&[a, c])?)?;
    Ok(4.0 * det - c_ab * c_ab - c_ac * c_ac)
}

/// `S(ρ₁) + S(ρ₂) − S(ρ₁₂)`; the two parts must be disjoint and cover every label.
pub fn mutual_information<S: AsRef<str>>(rho: &DensityMatrix, part1: &[S], part2: &[S]) -> Result<f64> {
    let p1 = rho.labels().positions(part1)?;
    let p2 = rho.labels().positions(part2)?;
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::InvalidPartition("mutual information needs two nonempty parts".into()));
    }
    if p1.iter().any(|p| p2.contains(p)) {
        return Err(Error::InvalidPartition("parts overlap".into()));
    }
    if p1.len() + p2.len() != rho.n_qubits() {
        return Err(Error::InvalidPartition("parts must cover every subsystem".into()));
    }
    let s1 = von_neumann_entropy(&rho.partial_trace(part1)?)?;
    let s2 = von_neumann_entropy(&rho.partial_trace(part2)?)?;
    Ok(s1 + s2 - von_neumann_entropy(rho)?)
}

/// `⟨v|_pos m |v⟩_pos`: contracts one qubit of an `n`-qubit operator with a pure projector.
fn contract_qubit(m: &ComplexMatrix, n: usize, pos: usize, v: &[C64; 2]) -> ComplexMatrix {
    let rest_dim = 1usize << (n - 1);
    let low_bits = n - 1 - pos;
    let low_mask = (1usize << low_bits) - 1;
    let insert = |rest: usize, bit: usize| ((rest >> low_bits) << (low_bits + 1)) | (bit << low_bits) | (rest & low_mask);
    let weights = [
        [v[0].conj() * v[0], v[0].conj() * v[1]],
        [v[1].conj() * v[0], v[1].conj() * v[1]],
    ];
    let mut out = ComplexMatrix::zeros(rest_dim);
    for r in 0..rest_dim {
        for c in 0..rest_dim {
            let mut acc = C64::new(0.0, 0.0);
            for (s, row) in weights.iter().enumerate() {
                for (t, w) in row.iter().enumerate() {
                    acc += w * m[(insert(r, s), insert(c, t))];
                }
            }
            out[(r, c)] = acc;
        }
    }
    out
}

/// Conditional entropy of the target after a fixed product measurement on `measured`
/// positions of the register `m` (which holds exactly the target and measured qubits).
struct ConditionalObjective {
    reduced: ComplexMatrix,
    n: usize,
    /// Measured positions in descending order, so contraction keeps lower positions valid.
    measured_desc: Vec<usize>,
    /// Basis index (into the optimizer's basis list) for each entry of `measured_desc`.
    basis_index: Vec<usize>,
}

impl ConditionalObjective {
    fn new<S: AsRef<str>>(rho: &DensityMatrix, target: &[S], measured: &[S]) -> Result<Self> {
        let labels = rho.labels();
        let t = labels.positions(target)?;
        let m = labels.positions(measured)?;
        if t.is_empty() || m.is_empty() {
            return Err(Error::InvalidPartition("target and measured parts must be nonempty".into()));
        }
        if !(1..=2).contains(&m.len()) {
            return Err(Error::InvalidPartition(format!("{} measured qubits (expected 1 or 2)", m.len())));
        }
        if t.iter().any(|p| m.contains(p)) {
            return Err(Error::InvalidPartition("target and measured parts overlap".into()));
        }
        let mut involved: Vec<usize> = t.iter().chain(&m).copied().collect();
        involved.sort_unstable();
        let reduced = rho.reduce_positions(&involved);
        // measured qubits in the order the caller named them define the basis order
        let order: Vec<usize> = measured
            .iter()
            .map(|name| {
                let p = labels.position(name.as_ref()).expect("validated");
                involved.iter().position(|&x| x == p).expect("kept")
            })
            .collect();
        let mut pairs: Vec<(usize, usize)> = order.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        pairs.sort_unstable_by_key(|x| std::cmp::Reverse(x.0));
        pairs.dedup_by_key(|x| x.0);
        Ok(Self {
            reduced: reduced.matrix().clone(),
            n: involved.len(),
            measured_desc: pairs.iter().map(|x| x.0).collect(),
            basis_index: pairs.iter().map(|x| x.1).collect(),
        })
    }

    fn measured_count(&self) -> usize {
        self.measured_desc.len()
    }

    fn evaluate(&self, bases: &[crate::measure::ProjectiveBasis]) -> Result<f64> {
        let k = self.measured_count();
        let vectors: Vec<[[C64; 2]; 2]> = self.basis_index.iter().map(|&i| bases[i].vectors()).collect();
        let mut total = 0.0;
        for outcome in 0..(1usize << k) {
            let mut m = self.reduced.clone();
            let mut n = self.n;
            for (slot, &pos) in self.measured_desc.iter().enumerate() {
                let bit = (outcome >> slot) & 1;
                m = contract_qubit(&m, n, pos, &vectors[slot][bit]);
                n -= 1;
            }
            let p = m.trace().re;
            if p < DEGENERATE_PROBABILITY {
                continue;
            }
            total += p * matrix_entropy(&m.scale(1.0 / p))?;
        }
        Ok(total)
    }
}

/// `min Σ_k p_k S(ρ_target|k)` over rank-1 product projective measurements on `measured`.
pub fn measured_conditional_entropy<S: AsRef<str>>(
    rho: &DensityMatrix,
    target: &[S],
    measured: &[S],
    cfg: &DiscordConfig,
) -> Result<f64> {
    let objective = ConditionalObjective::new(rho, target, measured)?;
    let res = minimize(objective.measured_count(), &cfg.search_spec(), |b| objective.evaluate(b))?;
    Ok(res.value.max(0.0))
}

/// How a [`CorrelationRow`]'s `D^(3)` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiscordRoute {
    PureShortcut,
    Full,
}

/// Breakdown of the genuine tripartite discord.
#[derive(Clone, Debug, Serialize)]
pub struct TripartiteDiscord {
    /// `T(ρ) = S(ρ_A) + S(ρ_B) + S(ρ_C) − S(ρ)`.
    pub total_information: f64,
    /// `J(ρ)`, maximized over the six orderings.
    pub classical: f64,
    /// `D(ρ) = T − J`.
    pub total_discord: f64,
    /// Symmetrized pairwise discords for (AB, AC, BC).
    pub pairwise: [f64; 3],
    /// `D^(2)`: the largest symmetrized pairwise discord.
    pub bipartite: f64,
    /// `D^(3) = D − D^(2)`.
    pub genuine: f64,
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Full genuine tripartite discord.
///
/// `D^(2)` is the largest of the three symmetrized pairwise discords: genuine correlations are
/// what remains after removing the strongest bipartite contribution. With this choice the
/// pure-state identity `D^(3) = S(ρ_k)` holds and `D^(3)` vanishes on biseparable states.
pub fn tripartite_discord_detail(rho: &DensityMatrix, cfg: &DiscordConfig) -> Result<TripartiteDiscord> {
    require_qubits(rho, 3)?;
    let names: Vec<&str> = (0..3).map(|i| name(rho, i)).collect();
    let singles: Vec<f64> = names
        .iter()
        .map(|n| von_neumann_entropy(&rho.partial_trace(&[*n])?))
        .collect::<Result<_>>()?;
    let s_total = von_neumann_entropy(rho)?;
    let total_information = singles.iter().sum::<f64>() - s_total;

    // S(i | measurement on j), evaluated on ρ_ij
    let mut cond_pair: HashMap<(usize, usize), f64> = HashMap::new();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let rho_ij = rho.partial_trace(&[names[i], names[j]])?;
                let v = measured_conditional_entropy(&rho_ij, &[names[i]], &[names[j]], cfg)?;
                cond_pair.insert((i, j), v);
            }
        }
    }
    // S(k | measurements on the other two)
    let mut cond_rest = [0.0; 3];
    for (k, slot) in cond_rest.iter_mut().enumerate() {
        let others: Vec<&str> = (0..3).filter(|&x| x != k).map(|x| names[x]).collect();
        *slot = measured_conditional_entropy(rho, &[names[k]], &others, cfg)?;
    }

    let mut classical = f64::NEG_INFINITY;
    for (i, j, k) in permutations3() {
        let v = singles[i] - cond_pair[&(i, j)] + singles[k] - cond_rest[k];
        classical = classical.max(v);
    }
    let total_discord = total_information - classical;

    let mut pairwise = [0.0; 3];
    for (slot, &(i, j)) in pairwise.iter_mut().zip(PAIRS.iter()) {
        let rho_ij = rho.partial_trace(&[names[i], names[j]])?;
        let mi = singles[i] + singles[j] - von_neumann_entropy(&rho_ij)?;
        let d_ij = mi - (singles[i] - cond_pair[&(i, j)]);
        let d_ji = mi - (singles[j] - cond_pair[&(j, i)]);
        *slot = d_ij.min(d_ji);
    }
    let bipartite = pairwise.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut genuine = total_discord - bipartite;
    if (-1e-6..0.0).contains(&genuine) {
        genuine = 0.0;
    }
    Ok(TripartiteDiscord {
        total_information,
        classical,
        total_discord,
        pairwise,
        bipartite,
        genuine,
    })
}

/// `D^(3)(ρ)`; see [`tripartite_discord_detail`].
pub fn tripartite_discord(rho: &DensityMatrix, cfg: &DiscordConfig) -> Result<f64> {
    Ok(tripartite_discord_detail(rho, cfg)?.genuine)
}

fn permutations3() -> [(usize, usize, usize); 6] {
    [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
}

/// Pairwise mutual informations `(I_AB, I_AC, I_BC)` of a three-qubit state.
pub fn pairwise_mutual_information(rho: &DensityMatrix) -> Result<[f64; 3]> {
    require_qubits(rho, 3)?;
    let mut out = [0.0; 3];
    for (slot, &(i, j)) in out.iter_mut().zip(PAIRS.iter()) {
        let rho_ij = rho.partial_trace(&[name(rho, i), name(rho, j)])?;
        *slot = mutual_information(&rho_ij, &[name(rho, i)], &[name(rho, j)])?;
    }
    Ok(out)
}

fn pair_slot(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        _ => 2,
    }
}

/// Pure-state shortcut `D^(3) = S(ρ_k)` for the first labeling `(i, j, k)` (lexicographic)
/// with `I(ρ_ij) ≥ I(ρ_ik) ≥ I(ρ_jk)`.
pub fn tripartite_discord_pure_shortcut(psi: &DensityMatrix) -> Result<f64> {
    require_qubits(psi, 3)?;
    require_pure(psi)?;
    let mi = pairwise_mutual_information(psi)?;
    for (i, j, k) in permutations3() {
        let (ij, ik, jk) = (mi[pair_slot(i, j)], mi[pair_slot(i, k)], mi[pair_slot(j, k)]);
        if ij >= ik - ORDERING_TOL && ik >= jk - ORDERING_TOL {
            return von_neumann_entropy(&psi.partial_trace(&[name(psi, k)])?);
        }
    }
    Err(Error::OrderingUnavailable)
}

/// Every correlation column of a family sweep, for one pure three-qubit state.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationRow {
    pub delta_sef: f64,
    pub d3: f64,
    pub d3_route: DiscordRoute,
    pub three_tangle: f64,
    /// Concurrences of (AB, AC, BC).
    pub concurrences: [f64; 3],
    /// Entanglement of formation of (AB, AC, BC).
    pub formation: [f64; 3],
    /// Mutual information of (AB, AC, BC).
    pub mutual_information: [f64; 3],
}

/// Evaluates every measure, using the pure-state discord shortcut when an ordering exists.
pub fn correlation_row(psi: &DensityMatrix, cfg: &DiscordConfig) -> Result<CorrelationRow> {
    require_qubits(psi, 3)?;
    require_pure(psi)?;
    let mut concurrences = [0.0; 3];
    let mut formation = [0.0; 3];
    for (slot, &(i, j)) in PAIRS.iter().enumerate() {
        let rho_ij = psi.partial_trace(&[name(psi, i), name(psi, j)])?;
        concurrences[slot] = concurrence(&rho_ij)?;
        formation[slot] = formation_from_concurrence(concurrences[slot])?;
    }
    let (d3, d3_route) = match tripartite_discord_pure_shortcut(psi) {
        Ok(v) => (v, DiscordRoute::PureShortcut),
        Err(Error::OrderingUnavailable) => (tripartite_discord(psi, cfg)?, DiscordRoute::Full),
        Err(e) => return Err(e),
    };
    Ok(CorrelationRow {
        delta_sef: delta_sef(psi)?,
        d3,
        d3_route,
        three_tangle: three_tangle(psi)?,
        concurrences,
        formation,
        mutual_information: pairwise_mutual_information(psi)?,
    })
}

/// Spectrum entropy helper exposed for callers holding eigenvalues already.
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    Ok(Spectrum::from_eigenvalues(values)?.entropy())
}
