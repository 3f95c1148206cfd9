//! Two-outcome projective measurements on a single auxiliary qubit.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::coherence::relative_entropy_coherence;
use crate::densmat::{ComplexMatrix, DensityMatrix, SystemLabel, C64};
use crate::error::{Error, Result};

/// Outcomes with probability below this are degenerate and carry no residual.
pub const DEGENERATE_PROBABILITY: f64 = 1e-12;

const TAU: f64 = 2.0 * PI;

/// The basis `|φ₊⟩ = cosθ|0⟩ + sinθ e^{iφ}|1⟩`, `|φ₋⟩ = sinθ|0⟩ − cosθ e^{iφ}|1⟩`
/// with `θ ∈ [0, π/2]` and `φ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ProjectiveBasis {
    theta: f64,
    phi: f64,
}

impl ProjectiveBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::DomainError(format!("theta {theta} outside [0, π/2]")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::DomainError(format!("phi {phi} outside [0, 2π)")));
        }
        Ok(Self { theta, phi })
    }

    /// Clamps `theta` into `[0, π/2]` and wraps `phi` into `[0, 2π)`.
    pub fn normalized(theta: f64, phi: f64) -> Self {
        let theta = theta.clamp(0.0, FRAC_PI_2);
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    /// The computational basis `{|0⟩, |1⟩}`.
    pub fn computational() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    /// `{(|0⟩ ± |1⟩)/√2}`.
    pub fn hadamard() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_4,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `[|φ₊⟩, |φ₋⟩]`.
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let phase = C64::from_polar(1.0, self.phi);
        [
            [C64::new(c, 0.0), phase * s],
            [C64::new(s, 0.0), -phase * c],
        ]
    }

    /// `[Ξ⁺, Ξ⁻]`.
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        let [plus, minus] = self.vectors();
        [ComplexMatrix::outer(&plus), ComplexMatrix::outer(&minus)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub probability: f64,
    /// `None` marks a degenerate outcome (probability below [`DEGENERATE_PROBABILITY`]).
    pub residual: Option<DensityMatrix>,
}

impl Outcome {
    pub fn is_degenerate(&self) -> bool {
        self.residual.is_none()
    }
}

/// Outcome probabilities with the normalized post-measurement states of the unmeasured subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementEnsemble {
    pub outcomes: Vec<Outcome>,
}

impl MeasurementEnsemble {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// `Σ_i P_i ρ^i` over the non-degenerate outcomes.
    pub fn mixture(&self) -> Option<ComplexMatrix> {
        let mut it = self.outcomes.iter().filter_map(|o| o.residual.as_ref().map(|r| (o.probability, r)));
        let (p0, r0) = it.next()?;
        let mut acc = r0.matrix().scale(p0);
        for (p, r) in it {
            acc = &acc + &r.matrix().scale(p);
        }
        Some(acc)
    }
}

/// Splits `rho` into the four blocks `ρ_{st} = ⟨s|_target ρ |t⟩_target` acting on the other qubits.
pub(crate) fn ancilla_blocks(m: &ComplexMatrix, n: usize, target: usize) -> [[ComplexMatrix; 2]; 2] {
    let rest_dim = 1usize << (n - 1);
    let low_bits = n - 1 - target;
    let insert = |rest: usize, bit: usize| -> usize {
        let high = rest >> low_bits;
        let low = rest & ((1 << low_bits) - 1);
        (high << (low_bits + 1)) | (bit << low_bits) | low
    };
    let block = |s: usize, t: usize| {
        let mut b = ComplexMatrix::zeros(rest_dim);
        for r in 0..rest_dim {
            let fr = insert(r, s);
            for c in 0..rest_dim {
                b[(r, c)] = m[(fr, insert(c, t))];
            }
        }
        b
    };
    [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]]
}

/// `⟨v|_target ρ |v⟩_target = Σ_{s,t} v̄_s v_t ρ_{st}` (unnormalized residual).
pub(crate) fn contract_blocks(blocks: &[[ComplexMatrix; 2]; 2], v: &[C64; 2]) -> ComplexMatrix {
    let dim = blocks[0][0].dim();
    let mut out = ComplexMatrix::zeros(dim);
    for s in 0..2 {
        for t in 0..2 {
            let w = v[s].conj() * v[t];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            let src = blocks[s][t].entries();
            for r in 0..dim {
                for c in 0..dim {
                    out[(r, c)] += w * src[r * dim + c];
                }
            }
        }
    }
    out
}

/// Measures `target` in `basis` and returns `(P_i, ρ^i)` on the remaining subsystems.
pub fn apply_measurement(rho: &DensityMatrix, target: &str, basis: &ProjectiveBasis) -> Result<MeasurementEnsemble> {
    let labels = rho.labels();
    let pos = labels.position(target)?;
    if labels.len() < 2 {
        return Err(Error::InvalidPartition("measuring the only subsystem leaves nothing".into()));
    }
    let rest: Vec<usize> = (0..labels.len()).filter(|&p| p != pos).collect();
    let rest_labels: SystemLabel = SystemLabel::new(rest.iter().map(|&p| labels.names()[p].clone()))?;
    let blocks = ancilla_blocks(rho.matrix(), labels.len(), pos);

    let outcomes = basis
        .vectors()
        .iter()
        .map(|v| {
            let unnormalized = contract_blocks(&blocks, v);
            let probability = unnormalized.trace().re;
            let residual = if probability < DEGENERATE_PROBABILITY {
                None
            } else {
                let m = unnormalized.scale(1.0 / probability).hermitian_part();
                Some(DensityMatrix::new(m, rest_labels.clone())?)
            };
            Ok(Outcome {
                probability: probability.max(0.0),
                residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasurementEnsemble { outcomes })
}

/// `Σ_i P_i C_r(Tr_{¬measure_on} ρ^i)` for a measurement of `target` in `basis`.
pub fn average_coherence<S: AsRef<str>>(
    rho: &DensityMatrix,
    target: &str,
    basis: &ProjectiveBasis,
    measure_on: &[S],
) -> Result<f64> {
    if measure_on.is_empty() {
        return Err(Error::InvalidPartition("no subsystem to distill on".into()));
    }
    if measure_on.iter().any(|m| m.as_ref() == target) {
        return Err(Error::InvalidPartition(format!("`{target}` is both measured and distilled")));
    }
    // validate names up front so the error is LabelNotFound rather than a partition error
    rho.labels().positions(measure_on)?;
    let ensemble = apply_measurement(rho, target, basis)?;
    let mut total = 0.0;
    for outcome in &ensemble.outcomes {
        if let Some(residual) = &outcome.residual {
            let reduced = residual.partial_trace(measure_on)?;
            total += outcome.probability * relative_entropy_coherence(&reduced)?;
        }
    }
    Ok(total)
}

/// Closed-form residual states of C after measuring A of the GHZ-type state:
/// `ρ_{+,C} = [[1 − p s², √(p(1−p)) s²], [√(p(1−p)) s², p s²]]` with `s = sinθ`, and
/// `ρ_{−,C}` the same with `cosθ` in place of `sinθ`. Both outcomes occur with probability ½.
pub fn residual_closed_form_ghz(p: f64, theta: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!("p = {p} outside [0, 1]")));
    }
    let labels = SystemLabel::new(["C"])?;
    let coupling = (p * (1.0 - p)).sqrt();
    let build = |w: f64| -> Result<DensityMatrix> {
        let m = ComplexMatrix::from_real(2, &[1.0 - p * w, coupling * w, coupling * w, p * w])?;
        DensityMatrix::new(m, labels.clone())
    };
    let (s, c) = theta.sin_cos();
    Ok((build(s * s)?, build(c * c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::binary_entropy;
    use crate::densmat::eigvals_hermitian;
    use crate::states::{make_family, random_density, Family, FamilyParam};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn bell() -> DensityMatrix {
        make_family(&FamilyParam::new(Family::Bell, 0.0)).unwrap()
    }

    #[test]
    fn bell_in_hadamard_basis() {
        let e = apply_measurement(&bell(), "A", &ProjectiveBasis::hadamard()).unwrap();
        let plus = ComplexMatrix::outer(&[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]);
        let minus = ComplexMatrix::outer(&[c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]);
        assert!((e.outcomes[0].probability - 0.5).abs() < 1e-15);
        assert!((e.outcomes[1].probability - 0.5).abs() < 1e-15);
        assert!(e.outcomes[0].residual.as_ref().unwrap().matrix().max_abs_diff(&plus) < 1e-15);
        assert!(e.outcomes[1].residual.as_ref().unwrap().matrix().max_abs_diff(&minus) < 1e-15);
        assert_eq!(e.outcomes[0].residual.as_ref().unwrap().labels().names(), ["B"]);
    }

    #[test]
    fn product_state_residuals_equal_marginal() {
        let a = random_density(1, 2, 1).unwrap();
        let b = DensityMatrix::new(
            random_density(1, 2, 2).unwrap().matrix().clone(),
            SystemLabel::new(["B"]).unwrap(),
        )
        .unwrap();
        let ab = a.tensor(&b).unwrap();
        let e = apply_measurement(&ab, "A", &ProjectiveBasis::new(0.3, 1.1).unwrap()).unwrap();
        for o in &e.outcomes {
            assert!(o.residual.as_ref().unwrap().matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn ghz_half_in_computational_basis() {
        let ghz = make_family(&FamilyParam::new(Family::GhzType, 0.5)).unwrap();
        let e = apply_measurement(&ghz, "A", &ProjectiveBasis::computational()).unwrap();
        assert!((e.outcomes[0].probability - 0.5).abs() < 1e-15);
        assert!((e.outcomes[1].probability - 0.5).abs() < 1e-15);
        let c0 = e.outcomes[0].residual.as_ref().unwrap().partial_trace(&["C"]).unwrap();
        let c1 = e.outcomes[1].residual.as_ref().unwrap().partial_trace(&["C"]).unwrap();
        assert!(c0.matrix().max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-15);
        assert!(c1.matrix().max_abs_diff(&ComplexMatrix::from_real(2, &[0.5; 4]).unwrap()) < 1e-15);
    }

    #[test]
    fn degenerate_outcomes_are_flagged() {
        let zero = DensityMatrix::new(ComplexMatrix::diag(&[1.0, 0.0]), SystemLabel::new(["A"]).unwrap()).unwrap();
        let b = DensityMatrix::maximally_mixed(SystemLabel::new(["B"]).unwrap());
        let e = apply_measurement(&zero.tensor(&b).unwrap(), "A", &ProjectiveBasis::computational()).unwrap();
        assert!(!e.outcomes[0].is_degenerate());
        assert!(e.outcomes[1].is_degenerate());
        assert_eq!(e.outcomes[1].probability, 0.0);
    }

    #[test]
    fn measurement_errors() {
        assert!(matches!(
            apply_measurement(&bell(), "X", &ProjectiveBasis::hadamard()),
            Err(Error::LabelNotFound(_))
        ));
        assert!(matches!(ProjectiveBasis::new(2.0, 0.0), Err(Error::DomainError(_))));
        assert!(matches!(ProjectiveBasis::new(0.1, 7.0), Err(Error::DomainError(_))));
        assert!(matches!(
            average_coherence(&bell(), "A", &ProjectiveBasis::hadamard(), &["A"]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn w_state_average_coherence() {
        let w = make_family(&FamilyParam::new(Family::WType, 0.5)).unwrap();
        let basis = ProjectiveBasis::hadamard();
        let bc = average_coherence(&w, "A", &basis, &["B", "C"]).unwrap();
        assert!((bc - 3f64.log2()).abs() < 1e-12);
        let b = average_coherence(&w, "A", &basis, &["B"]).unwrap();
        let disc = (1.0f64 - 4.0 / 9.0).sqrt();
        let expected = binary_entropy(1.0 / 3.0).unwrap() - binary_entropy((1.0 + disc) / 2.0).unwrap();
        assert!((b - expected).abs() < 1e-12);
        assert!((b - 0.3683).abs() < 1e-4);
    }

    #[test]
    fn computational_basis_leaves_b_incoherent_on_ghz_family() {
        for i in 0..=10 {
            let ghz = make_family(&FamilyParam::new(Family::GhzType, i as f64 / 10.0)).unwrap();
            let v = average_coherence(&ghz, "A", &ProjectiveBasis::computational(), &["B"]).unwrap();
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_examples() {
        let (plus, minus) = residual_closed_form_ghz(1.0, FRAC_PI_4).unwrap();
        for rho in [&plus, &minus] {
            let ev = eigvals_hermitian(rho.matrix()).unwrap();
            assert!((ev[0] - 0.5).abs() < 1e-12 && (ev[1] - 0.5).abs() < 1e-12);
        }
        for theta in [0.0, 0.4, 1.2] {
            let (plus, minus) = residual_closed_form_ghz(0.0, theta).unwrap();
            let ground = ComplexMatrix::diag(&[1.0, 0.0]);
            assert!(plus.matrix().max_abs_diff(&ground) < 1e-15);
            assert!(minus.matrix().max_abs_diff(&ground) < 1e-15);
        }
        let (plus, _) = residual_closed_form_ghz(0.5, 0.0).unwrap();
        assert!(plus.matrix().max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-15);
        assert!(matches!(residual_closed_form_ghz(1.5, 0.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn closed_form_eigenvalues() {
        // det ρ_{±,C} = p sin²θ cos²θ, so λ = (1 ± √(1 − p sin²2θ))/2
        for i in 0..20 {
            for j in 0..20 {
                let p = i as f64 / 19.0;
                let theta = j as f64 / 19.0 * std::f64::consts::FRAC_PI_2;
                let (plus, minus) = residual_closed_form_ghz(p, theta).unwrap();
                let root = (1.0 - p * (2.0 * theta).sin().powi(2)).sqrt();
                for rho in [&plus, &minus] {
                    let ev = eigvals_hermitian(rho.matrix()).unwrap();
                    assert!((ev[0] - (1.0 + root) / 2.0).abs() < 1e-9);
                    assert!((ev[1] - (1.0 - root) / 2.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_generic_measurement() {
        for i in 0..20 {
            let p = i as f64 / 19.0;
            let ghz = make_family(&FamilyParam::new(Family::GhzType, p)).unwrap();
            for j in 0..20 {
                let theta = j as f64 / 19.0 * std::f64::consts::FRAC_PI_2;
                let e = apply_measurement(&ghz, "A", &ProjectiveBasis::new(theta, 0.0).unwrap()).unwrap();
                let (plus, minus) = residual_closed_form_ghz(p, theta).unwrap();
                for (o, closed) in e.outcomes.iter().zip([&plus, &minus]) {
                    assert!((o.probability - 0.5).abs() < 1e-12);
                    let c = o.residual.as_ref().unwrap().partial_trace(&["C"]).unwrap();
                    assert!(c.matrix().max_abs_diff(closed.matrix()) < 1e-10, "p={p} theta={theta}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn basis_invariants(theta in 0.0..=std::f64::consts::FRAC_PI_2, phi in 0.0..(2.0 * PI)) {
            let [p, m] = ProjectiveBasis::new(theta, phi).unwrap().projectors();
            prop_assert!(p.matmul(&m).trace().norm() <= 1e-12);
            prop_assert!((&p + &m).max_abs_diff(&ComplexMatrix::identity(2)) <= 1e-12);
            prop_assert!(p.matmul(&p).max_abs_diff(&p) <= 1e-12);
            prop_assert!(m.matmul(&m).max_abs_diff(&m) <= 1e-12);
        }

        #[test]
        fn completeness_and_mixture(
            seed in any::<u64>(),
            rank in 1usize..=8,
            theta in 0.0..=std::f64::consts::FRAC_PI_2,
            phi in 0.0..(2.0 * PI),
            target in 0usize..3,
        ) {
            let rho = random_density(3, rank, seed).unwrap();
            let name = ["A", "B", "C"][target];
            let e = apply_measurement(&rho, name, &ProjectiveBasis::new(theta, phi).unwrap()).unwrap();
            prop_assert!((e.total_probability() - 1.0).abs() <= 1e-9);
            let marginal = rho.trace_out(&[name]).unwrap();
            prop_assert!(e.mixture().unwrap().max_abs_diff(marginal.matrix()) <= 1e-10);
        }
    }
}
