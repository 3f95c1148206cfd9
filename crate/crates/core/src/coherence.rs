//! Entropies and coherence measures in the computational reference basis.
//!
//! All logarithms are base 2, so a maximally coherent qubit carries one bit.

use crate::densmat::{
    dephase_positions, eigvals_hermitian, ComplexMatrix, DensityMatrix,
};
use crate::error::{Error, Result};

/// Eigenvalues in `[-CLIP_TOL, 0)` are clipped to zero; anything lower is rejected.
pub const CLIP_TOL: f64 = 1e-9;
/// Eigenvalues below this are treated as exact zeros (`0 log 0 = 0`).
pub const ZERO_EIGENVALUE: f64 = 1e-15;

/// A probability vector obtained from a density-matrix spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    probabilities: Vec<f64>,
}

impl Spectrum {
    /// Clips roundoff negatives, zeroes sub-`1e-15` entries and renormalizes.
    pub fn from_eigenvalues(values: &[f64]) -> Result<Self> {
        let mut probabilities = Vec::with_capacity(values.len());
        for &v in values {
            if !v.is_finite() || v < -CLIP_TOL {
                return Err(Error::NegativeEigenvalue(v));
            }
            probabilities.push(if v < ZERO_EIGENVALUE { 0.0 } else { v });
        }
        let total: f64 = probabilities.iter().sum();
        if total <= 0.0 {
            return Err(Error::DomainError("spectrum has no positive weight".into()));
        }
        for p in &mut probabilities {
            *p /= total;
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.probabilities)
    }
}

/// `−Σ p log₂ p` over the strictly positive entries.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > ZERO_EIGENVALUE)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `H(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(shannon_entropy(&[x, 1.0 - x]))
}

/// Von Neumann entropy of a raw Hermitian, unit-trace matrix.
pub fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    let values = eigvals_hermitian(m)?;
    Ok(Spectrum::from_eigenvalues(&values)?.entropy())
}

/// Entropy of the fully dephased matrix (Shannon entropy of the diagonal).
pub(crate) fn diagonal_entropy(m: &ComplexMatrix) -> Result<f64> {
    Ok(Spectrum::from_eigenvalues(&m.diagonal())?.entropy())
}

/// `S(Δρ) − S(ρ)` for a raw matrix; used in the optimizer inner loops.
pub(crate) fn matrix_relative_entropy_coherence(m: &ComplexMatrix) -> Result<f64> {
    Ok(diagonal_entropy(m)? - matrix_entropy(m)?)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

/// Removes coherence on the named subsystems.
pub fn dephase<S: AsRef<str>>(rho: &DensityMatrix, targets: &[S]) -> Result<DensityMatrix> {
    let positions = rho.labels().positions(targets)?;
    let m = dephase_positions(rho.matrix(), rho.n_qubits(), &positions);
    Ok(DensityMatrix::from_trusted(m, rho.labels().clone()))
}

/// Relative entropy of coherence `C_r(ρ) = S(Δρ) − S(ρ)`.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> Result<f64> {
    matrix_relative_entropy_coherence(rho.matrix())
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut total = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                total += m[(r, c)].norm();
            }
        }
    }
    total
}

/// Quantum-incoherent relative entropy `S(Δ^X ρ) − S(ρ)` with `X = incoherent_part`.
pub fn qi_relative_entropy<S: AsRef<str>>(rho: &DensityMatrix, incoherent_part: &[S]) -> Result<f64> {
    if incoherent_part.is_empty() {
        return Err(Error::InvalidPartition("incoherent part is empty".into()));
    }
    let dephased = dephase(rho, incoherent_part)?;
    Ok(von_neumann_entropy(&dephased)? - von_neumann_entropy(rho)?)
}

/// `S(X|Y) = S(ρ_XY) − S(ρ_Y)` where `Y = conditioning` and `X` is everything else in `rho`.
pub fn conditional_entropy<S: AsRef<str>>(rho: &DensityMatrix, conditioning: &[S]) -> Result<f64> {
    let marginal = rho.partial_trace(conditioning)?;
    Ok(von_neumann_entropy(rho)? - von_neumann_entropy(&marginal)?)
}
