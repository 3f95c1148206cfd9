//! Cyclic Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation. The sweep order is
//! row-cyclic; iteration stops once the off-diagonal Frobenius mass drops below
//! `1e-14` (relative to the matrix scale when that exceeds one).

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Maximum entrywise Hermiticity defect accepted by the eigensolver, relative to `max(1, max|m|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in self.values.iter().enumerate() {
            for r in 0..n {
                let vr = self.vectors[(r, k)] * lambda;
                for c in 0..n {
                    out[(r, c)] += vr * self.vectors[(c, k)].conj();
                }
            }
        }
        out
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        let n = self.values.len();
        (0..n).map(|r| self.vectors[(r, k)]).collect()
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    jacobi(&mut a, Some(&mut v));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, in descending order.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut values = match n {
        1 => vec![m[(0, 0)].re],
        2 => {
            // closed form avoids the rotation bookkeeping in the hot path
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean + radius, mean - radius]
        }
        _ => {
            let mut a = m.hermitian_part();
            jacobi(&mut a, None);
            a.diagonal()
        }
    };
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

fn jacobi(a: &mut ComplexMatrix, mut v: Option<&mut ComplexMatrix>) {
    let n = a.dim();
    if n < 2 {
        return;
    }
    let scale = {
        let frob: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        frob.max(1.0)
    };
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() < OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(a, v.as_deref_mut(), p, q);
            }
        }
    }
}

/// Annihilates `a[p,q]` with the unitary `U = D R`, where `D` removes the pivot phase
/// and `R` is the real Jacobi rotation; `A ← U† A U`, `V ← V U`.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r; // e^{iα}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * u_pp + vkq * u_qp;
            v[(k, q)] = vkp * u_pq + vkq * u_qq;
        }
    }
}
