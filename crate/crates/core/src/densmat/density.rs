use std::collections::HashSet;
use std::fmt;

use super::eigen::eigvals_hermitian;
use super::matrix::{partial_trace_positions, ComplexMatrix, C64};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
/// Largest supported register (matrices up to 256×256).
pub const MAX_QUBITS: usize = 8;

/// Ordered names of the qubit subsystems a matrix acts on. The first name is the
/// most significant bit of the basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemLabel {
    names: Vec<String>,
}

impl SystemLabel {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidPartition("a state needs at least one subsystem".into()));
        }
        if names.len() > MAX_QUBITS {
            return Err(Error::DomainError(format!(
                "{} subsystems exceed the supported maximum of {MAX_QUBITS}",
                names.len()
            )));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::LabelCollision(n.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.names.len()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::LabelNotFound(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Sorted, deduplicated positions of `names`.
    pub fn positions<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let mut pos = names
            .iter()
            .map(|n| self.position(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos)
    }

    pub(crate) fn select(&self, positions: &[usize]) -> SystemLabel {
        SystemLabel {
            names: positions.iter().map(|&p| self.names[p].clone()).collect(),
        }
    }

    fn concat(&self, other: &SystemLabel) -> Result<SystemLabel> {
        if let Some(dup) = other.names.iter().find(|n| self.contains(n)) {
            return Err(Error::LabelCollision(dup.clone()));
        }
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        SystemLabel::new(names)
    }
}

impl fmt::Display for SystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(""))
    }
}

/// Defects of a candidate density matrix against the Hermitian, unit-trace and PSD invariants.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ValidationReport {
    pub hermitian_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub valid: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermitian defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e}",
            self.hermitian_defect, self.trace_defect, self.min_eigenvalue
        )
    }
}

/// Checks a raw matrix against the density-matrix invariants. Never fails; the
/// spectrum is taken from the Hermitian part when the input is not Hermitian.
pub fn validate_density(m: &ComplexMatrix) -> ValidationReport {
    let hermitian_defect = m.hermitian_defect();
    let trace_defect = (m.trace() - C64::new(1.0, 0.0)).norm();
    let min_eigenvalue = eigvals_hermitian(&m.hermitian_part())
        .ok()
        .and_then(|v| v.last().copied())
        .unwrap_or(f64::NAN);
    let valid = hermitian_defect <= HERMITIAN_TOL
        && trace_defect <= TRACE_TOL
        && min_eigenvalue >= -PSD_TOL;
    ValidationReport {
        hermitian_defect,
        trace_defect,
        min_eigenvalue,
        valid,
    }
}

/// A validated multi-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    labels: SystemLabel,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, labels: SystemLabel) -> Result<Self> {
        if matrix.dim() != labels.dim() {
            return Err(Error::DimensionError {
                expected: labels.dim(),
                got: matrix.dim(),
            });
        }
        let report = validate_density(&matrix);
        if !report.valid {
            return Err(Error::InvalidState(report));
        }
        Ok(Self { matrix, labels })
    }

    /// `|ψ⟩⟨ψ|`; the amplitudes must have unit norm within 1e-12.
    pub fn pure(amplitudes: &[C64], labels: SystemLabel) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::DomainError(format!("state vector norm² is {norm}")));
        }
        Self::new(ComplexMatrix::outer(amplitudes), labels)
    }

    /// `|ψ⟩⟨ψ|` after normalizing the amplitudes.
    pub fn pure_normalized(amplitudes: &[C64], labels: SystemLabel) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::DomainError("zero state vector".into()));
        }
        let v: Vec<C64> = amplitudes.iter().map(|a| a / norm).collect();
        Self::pure(&v, labels)
    }

    /// Skips validation; callers guarantee the invariants up to roundoff.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, labels: SystemLabel) -> Self {
        debug_assert_eq!(matrix.dim(), labels.dim());
        Self { matrix, labels }
    }

    pub fn maximally_mixed(labels: SystemLabel) -> Self {
        let d = labels.dim();
        Self::from_trusted(ComplexMatrix::identity(d).scale(1.0 / d as f64), labels)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &SystemLabel {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    pub fn validate(&self) -> ValidationReport {
        validate_density(&self.matrix)
    }

    /// Kronecker product with concatenated labels.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let labels = self.labels.concat(&other.labels)?;
        Ok(Self::from_trusted(self.matrix.kron(&other.matrix), labels))
    }

    /// Reduced state on `keep`; surviving labels keep their original order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidPartition("nothing to keep".into()));
        }
        let positions = self.labels.positions(keep)?;
        Ok(self.reduce_positions(&positions))
    }

    /// Traces out `names`, keeping everything else.
    pub fn trace_out<S: AsRef<str>>(&self, names: &[S]) -> Result<DensityMatrix> {
        let drop = self.labels.positions(names)?;
        let keep: Vec<usize> = (0..self.n_qubits()).filter(|p| !drop.contains(p)).collect();
        if keep.is_empty() {
            return Err(Error::InvalidPartition("cannot trace out every subsystem".into()));
        }
        Ok(self.reduce_positions(&keep))
    }

    pub(crate) fn reduce_positions(&self, positions: &[usize]) -> DensityMatrix {
        if positions.len() == self.n_qubits() {
            return self.clone();
        }
        let m = partial_trace_positions(&self.matrix, self.n_qubits(), positions);
        Self::from_trusted(m, self.labels.select(positions))
    }
}

/// Free-function form of [`DensityMatrix::tensor`].
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    a.tensor(b)
}

/// Free-function form of [`DensityMatrix::partial_trace`].
pub fn partial_trace<S: AsRef<str>>(rho: &DensityMatrix, keep: &[S]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn labels(names: &[&str]) -> SystemLabel {
        SystemLabel::new(names.iter().copied()).unwrap()
    }

    fn bell() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(h), c(0.0), c(0.0), c(h)], labels(&["A", "B"])).unwrap()
    }

    #[test]
    fn tensor_basis_projectors() {
        let zero = DensityMatrix::new(ComplexMatrix::diag(&[1.0, 0.0]), labels(&["A"])).unwrap();
        let one = DensityMatrix::new(ComplexMatrix::diag(&[0.0, 1.0]), labels(&["B"])).unwrap();
        let t = zero.tensor(&one).unwrap();
        assert_eq!(t.matrix(), &ComplexMatrix::diag(&[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(t.labels().names(), ["A", "B"]);
    }

    #[test]
    fn tensor_maximally_mixed() {
        let a = DensityMatrix::maximally_mixed(labels(&["A"]));
        let b = DensityMatrix::maximally_mixed(labels(&["B"]));
        let t = a.tensor(&b).unwrap();
        assert!(t.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn tensor_of_max_coherent_states_is_uniform() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi_a = DensityMatrix::pure(&[c(h), c(h)], labels(&["A"])).unwrap();
        let phi_b = DensityMatrix::pure(&[c(h), c(h)], labels(&["B"])).unwrap();
        let t = phi_a.tensor(&phi_b).unwrap();
        for z in t.matrix().entries() {
            assert!((z - c(0.25)).norm() < 1e-15);
        }
        assert!((t.matrix().trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tensor_rejects_shared_labels() {
        let a = DensityMatrix::maximally_mixed(labels(&["A"]));
        assert!(matches!(a.tensor(&a), Err(Error::LabelCollision(l)) if l == "A"));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rb = bell().partial_trace(&["B"]).unwrap();
        assert!(rb.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        assert_eq!(rb.labels().names(), ["B"]);
    }

    #[test]
    fn product_marginal_returns_factor() {
        let zero = DensityMatrix::new(ComplexMatrix::diag(&[1.0, 0.0]), labels(&["A"])).unwrap();
        let rho_b = DensityMatrix::new(
            ComplexMatrix::from_entries(2, vec![c(0.6), C64::new(0.1, 0.2), C64::new(0.1, -0.2), c(0.4)])
                .unwrap(),
            labels(&["B"]),
        )
        .unwrap();
        let prod = zero.tensor(&rho_b).unwrap();
        assert_eq!(prod.partial_trace(&["B"]).unwrap(), rho_b);
    }

    #[test]
    fn w_state_marginal_on_c() {
        let a = 1.0 / 3f64.sqrt();
        let mut amps = vec![c(0.0); 8];
        amps[0b100] = c(a);
        amps[0b010] = c(a);
        amps[0b001] = c(a);
        let w = DensityMatrix::pure(&amps, labels(&["A", "B", "C"])).unwrap();
        let rc = w.partial_trace(&["C"]).unwrap();
        assert!(rc.matrix().max_abs_diff(&ComplexMatrix::diag(&[2.0 / 3.0, 1.0 / 3.0])) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let b = bell();
        assert!(matches!(b.partial_trace(&["Z"]), Err(Error::LabelNotFound(l)) if l == "Z"));
        let empty: [&str; 0] = [];
        assert!(matches!(b.partial_trace(&empty), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn keep_order_is_label_order() {
        let b = bell();
        let kept = b.partial_trace(&["B", "A"]).unwrap();
        assert_eq!(kept.labels().names(), ["A", "B"]);
        assert_eq!(kept, b);
    }

    #[test]
    fn validation_reports() {
        let ok = validate_density(&ComplexMatrix::identity(2).scale(0.5));
        assert!(ok.valid);

        let bad_trace = validate_density(&ComplexMatrix::diag(&[0.6, 0.6]));
        assert!(!bad_trace.valid);
        assert!((bad_trace.trace_defect - 0.2).abs() < 1e-12);

        let negative = validate_density(&ComplexMatrix::diag(&[1.1, -0.1]));
        assert!(!negative.valid);
        assert!((negative.min_eigenvalue + 0.1).abs() < 1e-12);

        let skew = ComplexMatrix::from_real(2, &[0.5, 0.3, 0.1, 0.5]).unwrap();
        let rep = validate_density(&skew);
        assert!(!rep.valid);
        assert!((rep.hermitian_defect - 0.2).abs() < 1e-12);
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(SystemLabel::new(["A", "A"]), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn new_rejects_dimension_mismatch() {
        let err = DensityMatrix::new(ComplexMatrix::identity(2).scale(0.5), labels(&["A", "B"]));
        assert!(matches!(err, Err(Error::DimensionError { expected: 4, got: 2 })));
    }
}
