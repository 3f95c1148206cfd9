use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DomainError("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionError {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from separate row-major real and imaginary parts.
    pub fn from_parts(dim: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionError {
                expected: re.len(),
                got: im.len(),
            });
        }
        let entries = re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect();
        Self::from_entries(dim, entries)
    }

    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self> {
        Self::from_entries(dim, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for an (unnormalized) vector `v`.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                entries.push(a * b.conj());
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                let dst = &mut out.entries[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self.entries[r1 * n + c1];
                if a == ZERO {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in 0..m {
                        out.entries[(r1 * m + r2) * dim + c1 * m + c2] =
                            a * other.entries[r2 * m + c2];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// Real parts of the diagonal.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.entries[i * self.dim + i].re).collect()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_in_place(&mut self, factor: f64) {
        for z in &mut self.entries {
            *z *= factor;
        }
    }

    /// `max |M[j,k] − conj(M[k,j])|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                let d = (self.entries[r * n + c] - self.entries[c * n + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut sum = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    sum += self.entries[r * n + c].norm_sqr();
                }
            }
        }
        sum.sqrt()
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for r in 0..n {
            out.entries[r * n + r] = C64::new(self.entries[r * n + r].re, 0.0);
            for c in r + 1..n {
                let z = (self.entries[r * n + c] + self.entries[c * n + r].conj()) * 0.5;
                out.entries[r * n + c] = z;
                out.entries[c * n + r] = z.conj();
            }
        }
        out
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.entries[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.entries[r * self.dim + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Bit of qubit `pos` (0 = most significant) in basis index `idx` of an `n`-qubit register.
#[inline]
pub(crate) fn qubit_bit(idx: usize, pos: usize, n: usize) -> usize {
    (idx >> (n - 1 - pos)) & 1
}

/// Scatters the bits of `sub` (a register over `positions`, in order) into a full index.
pub(crate) fn scatter_bits(sub: usize, positions: &[usize], n: usize) -> usize {
    let k = positions.len();
    positions.iter().enumerate().fold(0, |acc, (i, &pos)| {
        acc | (((sub >> (k - 1 - i)) & 1) << (n - 1 - pos))
    })
}

/// Partial trace of an `n`-qubit operator keeping the qubits at `keep` (sorted ascending).
pub(crate) fn partial_trace_positions(m: &ComplexMatrix, n: usize, keep: &[usize]) -> ComplexMatrix {
    debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
    let traced: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
    let kept_dim = 1usize << keep.len();
    let traced_dim = 1usize << traced.len();
    let kept_idx: Vec<usize> = (0..kept_dim).map(|s| scatter_bits(s, keep, n)).collect();
    let traced_idx: Vec<usize> = (0..traced_dim).map(|s| scatter_bits(s, &traced, n)).collect();
    let full = m.dim();
    let src = m.entries();
    let mut out = ComplexMatrix::zeros(kept_dim);
    for (r, &rk) in kept_idx.iter().enumerate() {
        for (c, &ck) in kept_idx.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_idx {
                acc += src[(rk | t) * full + (ck | t)];
            }
            out[(r, c)] = acc;
        }
    }
    out
}

/// Zeroes every entry whose row and column differ on any of the qubits at `positions`.
pub(crate) fn dephase_positions(m: &ComplexMatrix, n: usize, positions: &[usize]) -> ComplexMatrix {
    let mask = positions.iter().fold(0usize, |acc, &p| acc | (1 << (n - 1 - p)));
    let dim = m.dim();
    let mut out = m.clone();
    for r in 0..dim {
        for c in 0..dim {
            if (r ^ c) & mask != 0 {
                out[(r, c)] = ZERO;
            }
        }
    }
    out
}

/// Embeds an operator acting on the qubits at `positions` (in that order) into an `n`-qubit register.
pub(crate) fn embed_operator(op: &ComplexMatrix, positions: &[usize], n: usize) -> ComplexMatrix {
    let k = positions.len();
    assert_eq!(op.dim(), 1 << k, "operator dimension does not match positions");
    let mask = positions.iter().fold(0usize, |acc, &p| acc | (1 << (n - 1 - p)));
    let gather = |idx: usize| -> usize {
        positions
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &p)| acc | (qubit_bit(idx, p, n) << (k - 1 - i)))
    };
    let dim = 1usize << n;
    let mut out = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        let rs = gather(r);
        for c in 0..dim {
            if (r & !mask) != (c & !mask) {
                continue;
            }
            out[(r, c)] = op[(rs, gather(c))];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: C64, b: f64) -> bool {
        (a - C64::new(b, 0.0)).norm() < 1e-14
    }

    #[test]
    fn kron_of_basis_projectors() {
        let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag(&[0.0, 1.0]);
        let k = p0.kron(&p1);
        assert_eq!(k, ComplexMatrix::diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn rejects_wrong_entry_count() {
        let err = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::DimensionError { expected: 4, got: 3 }));
    }

    #[test]
    fn partial_trace_positions_of_product() {
        let a = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let b = ComplexMatrix::from_real(2, &[0.4, -0.1, -0.1, 0.6]).unwrap();
        let ab = a.kron(&b);
        assert!(partial_trace_positions(&ab, 2, &[0]).max_abs_diff(&a) < 1e-15);
        assert!(partial_trace_positions(&ab, 2, &[1]).max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn embed_matches_kron_on_last_qubit() {
        let x = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let embedded = embed_operator(&x, &[2], 3);
        let expected = ComplexMatrix::identity(4).kron(&x);
        assert_eq!(embedded, expected);
        let embedded_mid = embed_operator(&x, &[1], 3);
        let expected_mid = ComplexMatrix::identity(2).kron(&x).kron(&ComplexMatrix::identity(2));
        assert_eq!(embedded_mid, expected_mid);
    }

    #[test]
    fn dephase_positions_zeroes_cross_terms() {
        let m = ComplexMatrix::from_real(4, &[0.25; 16]).unwrap();
        let d = dephase_positions(&m, 2, &[1]);
        assert!(approx(d[(0, 2)], 0.25));
        assert!(approx(d[(0, 1)], 0.0));
        assert!(approx(d[(1, 3)], 0.25));
    }
}
