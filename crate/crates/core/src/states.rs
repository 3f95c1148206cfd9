//! State factory: the W-type and GHZ-type families, their generating channels,
//! standard N-qubit states, and seeded random densities.
//!
//! Channel naming follows the family each channel produces. [`ChannelKind::WChannel`]
//! moves the `|1⟩_B` excitation onto C (the experiment's amplitude-decay setting) and
//! [`ChannelKind::GhzChannel`] copies it onto C while keeping B (the phase-damping
//! setting). Both use amplitudes `√(1−p)` and `√p`, the unique normalized choice that
//! reproduces the two target families.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::densmat::{embed_operator, ComplexMatrix, DensityMatrix, SystemLabel, C64, MAX_QUBITS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(|100⟩ + √(2(1−p))|010⟩ + √(2p)|001⟩)/√3`
    WType,
    /// `(|000⟩ + √(1−p)|110⟩ + √p|111⟩)/√2`
    GhzType,
    /// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
    GhzN,
    /// Uniform superposition of single excitations on `n` qubits.
    WN,
    /// `(|00⟩ + |11⟩)/√2`
    Bell,
}

impl Family {
    pub const CLI_NAMES: [&'static str; 5] = ["w", "ghz", "ghz-n", "w-n", "bell"];

    pub fn cli_name(self) -> &'static str {
        match self {
            Family::WType => "w",
            Family::GhzType => "ghz",
            Family::GhzN => "ghz-n",
            Family::WN => "w-n",
            Family::Bell => "bell",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "w" => Ok(Family::WType),
            "ghz" => Ok(Family::GhzType),
            "ghz-n" => Ok(Family::GhzN),
            "w-n" => Ok(Family::WN),
            "bell" => Ok(Family::Bell),
            other => Err(Error::DomainError(format!(
                "unknown family `{other}` (expected one of {})",
                Family::CLI_NAMES.join(", ")
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParam {
    pub family: Family,
    /// Superposition parameter; ignored by the N-qubit and Bell families.
    pub p: f64,
    /// Qubit count for the N-qubit families.
    pub n: usize,
}

impl FamilyParam {
    pub fn new(family: Family, p: f64) -> Self {
        Self { family, p, n: 3 }
    }

    pub fn with_qubits(family: Family, n: usize) -> Self {
        Self { family, p: 0.0, n }
    }

    pub fn n_qubits(&self) -> usize {
        match self.family {
            Family::WType | Family::GhzType => 3,
            Family::Bell => 2,
            Family::GhzN | Family::WN => self.n,
        }
    }
}

/// Default subsystem names: `A`, `B`, `C`, ...
pub fn default_labels(n: usize) -> Result<SystemLabel> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::DomainError(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    SystemLabel::new((0..n).map(|i| char::from(b'A' + i as u8).to_string()))
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// State vector of a family member.
pub fn family_amplitudes(param: &FamilyParam) -> Result<Vec<C64>> {
    check_p(param.p)?;
    let p = param.p;
    let amps = match param.family {
        Family::WType => {
            let mut v = vec![r(0.0); 8];
            v[0b100] = r((1.0f64 / 3.0).sqrt());
            v[0b010] = r((2.0 * (1.0 - p) / 3.0).sqrt());
            v[0b001] = r((2.0 * p / 3.0).sqrt());
            v
        }
        Family::GhzType => {
            let mut v = vec![r(0.0); 8];
            v[0b000] = r(0.5f64.sqrt());
            v[0b110] = r(((1.0 - p) / 2.0).sqrt());
            v[0b111] = r((p / 2.0).sqrt());
            v
        }
        Family::Bell => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            vec![r(h), r(0.0), r(0.0), r(h)]
        }
        Family::GhzN => {
            let n = param.n;
            if !(2..=MAX_QUBITS).contains(&n) {
                return Err(Error::DomainError(format!("GHZ needs 2..={MAX_QUBITS} qubits, got {n}")));
            }
            let mut v = vec![r(0.0); 1 << n];
            let h = std::f64::consts::FRAC_1_SQRT_2;
            v[0] = r(h);
            v[(1 << n) - 1] = r(h);
            v
        }
        Family::WN => {
            let n = param.n;
            if !(2..=MAX_QUBITS).contains(&n) {
                return Err(Error::DomainError(format!("W needs 2..={MAX_QUBITS} qubits, got {n}")));
            }
            let mut v = vec![r(0.0); 1 << n];
            let a = 1.0 / (n as f64).sqrt();
            for k in 0..n {
                v[1 << k] = r(a);
            }
            v
        }
    };
    Ok(amps)
}

/// `|φ⟩⟨φ|` for a family member, labeled `A, B, C, ...`.
pub fn make_family(param: &FamilyParam) -> Result<DensityMatrix> {
    let amps = family_amplitudes(param)?;
    DensityMatrix::pure(&amps, default_labels(param.n_qubits())?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    /// `|1⟩_B|0⟩_C → √(1−p)|1⟩_B|0⟩_C + √p|0⟩_B|1⟩_C`; produces the W-type family.
    WChannel,
    /// `|1⟩_B|0⟩_C → √(1−p)|1⟩_B|0⟩_C + √p|1⟩_B|1⟩_C`; produces the GHZ-type family.
    GhzChannel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p: f64) -> Self {
        Self { kind, p }
    }

    /// Unitary on `B ⊗ C` (index `2b + c`) whose action on `|·⟩_B|0⟩_C` is the channel isometry.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        check_p(self.p)?;
        let keep = (1.0 - self.p).sqrt();
        let leak = self.p.sqrt();
        let mut u = ComplexMatrix::zeros(4);
        u[(0, 0)] = r(1.0);
        match self.kind {
            ChannelKind::WChannel => {
                // |10⟩ → keep|10⟩ + leak|01⟩, completed on |01⟩
                u[(2, 2)] = r(keep);
                u[(1, 2)] = r(leak);
                u[(2, 1)] = r(-leak);
                u[(1, 1)] = r(keep);
                u[(3, 3)] = r(1.0);
            }
            ChannelKind::GhzChannel => {
                // |10⟩ → keep|10⟩ + leak|11⟩, completed on |11⟩
                u[(2, 2)] = r(keep);
                u[(3, 2)] = r(leak);
                u[(2, 3)] = r(-leak);
                u[(3, 3)] = r(keep);
                u[(1, 1)] = r(1.0);
            }
        }
        Ok(u)
    }
}

/// Runs the channel on subsystems `B` and `C`; `C` is adjoined in `|0⟩` when absent.
pub fn apply_channel(rho: &DensityMatrix, spec: &ChannelSpec) -> Result<DensityMatrix> {
    let u = spec.unitary()?;
    let labels = rho.labels();
    let b = labels.position("B")?;
    let state = if labels.contains("C") {
        let marginal = rho.partial_trace(&["C"])?;
        let excited = marginal.matrix()[(1, 1)].re;
        if excited > 1e-12 || marginal.matrix()[(0, 1)].norm() > 1e-12 {
            return Err(Error::InvalidInitialization(format!(
                "subsystem C is not in |0⟩ (population of |1⟩ = {excited:.3e})"
            )));
        }
        rho.clone()
    } else {
        let zero = DensityMatrix::new(ComplexMatrix::diag(&[1.0, 0.0]), SystemLabel::new(["C"])?)?;
        rho.tensor(&zero)?
    };
    let c = state.labels().position("C")?;
    let full = embed_operator(&u, &[b, c], state.n_qubits());
    let out = state.matrix().conjugate_by(&full);
    DensityMatrix::new(out, state.labels().clone())
}

/// The initial `A ⊗ B` preparation that the channel turns into the given family.
pub fn channel_initial_state(kind: ChannelKind) -> Result<DensityMatrix> {
    let labels = SystemLabel::new(["A", "B"])?;
    match kind {
        ChannelKind::WChannel => {
            // (|10⟩ + √2|01⟩)/√3
            let s = (1.0f64 / 3.0).sqrt();
            DensityMatrix::pure(&[r(0.0), r(s * 2f64.sqrt()), r(s), r(0.0)], labels)
        }
        ChannelKind::GhzChannel => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            DensityMatrix::pure(&[r(h), r(0.0), r(0.0), r(h)], labels)
        }
    }
}

/// `ρ = GG†/Tr(GG†)` with `G` a seeded `2^n × rank` complex Gaussian matrix.
pub fn random_density(n_qubits: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let labels = default_labels(n_qubits)?;
    let dim = labels.dim();
    if rank == 0 || rank > dim {
        return Err(Error::DomainError(format!("rank {rank} outside 1..={dim}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g: Vec<C64> = (0..dim * rank)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..rank {
                acc += g[i * rank + k] * g[j * rank + k].conj();
            }
            m[(i, j)] = acc;
        }
    }
    let tr = m.trace().re;
    m.scale_in_place(1.0 / tr);
    // exact Hermitian symmetry after scaling
    let m = m.hermitian_part();
    DensityMatrix::new(m, labels)
}

/// Seeded Haar-random pure state.
pub fn random_pure(n_qubits: usize, seed: u64) -> Result<DensityMatrix> {
    random_density(n_qubits, 1, seed)
}
