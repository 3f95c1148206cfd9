//! Global grid scan followed by compass pattern search over measurement angles.
//!
//! Every measured qubit contributes a `(θ, φ)` pair: `θ` lives on the closed interval
//! `[0, π/2]` (grid includes both ends, moves are clamped) and `φ` on the circle
//! `[0, 2π)` (grid excludes 2π, moves wrap). The grid is evaluated in parallel but the
//! argmax reduction runs in lexicographic grid order, so the smallest angles win ties.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::ProjectiveBasis;

/// Improvements smaller than this (relative to `max(1, |f|)`) count as ties.
const TIE_TOL: f64 = 1e-14;
/// Moves allowed at one step size before shrinking.
const MAX_MOVES_PER_LEVEL: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub refine_iterations: usize,
    pub refine_shrink: f64,
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 2 || self.n_phi < 1 {
            return Err(Error::InvalidConfig(format!(
                "grid {}x{} too small (need n_theta ≥ 2, n_phi ≥ 1)",
                self.n_theta, self.n_phi
            )));
        }
        if !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
            return Err(Error::InvalidConfig(format!("refine shrink {} outside (0, 1)", self.refine_shrink)));
        }
        Ok(())
    }

    fn theta_step(&self) -> f64 {
        FRAC_PI_2 / (self.n_theta - 1) as f64
    }

    fn phi_step(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// One basis per measured qubit.
    pub bases: Vec<ProjectiveBasis>,
    pub value: f64,
    /// Accepted refinement moves, starting with the best grid point.
    pub trace: Vec<(Vec<ProjectiveBasis>, f64)>,
}

fn to_bases(x: &[f64]) -> Vec<ProjectiveBasis> {
    x.chunks(2).map(|a| ProjectiveBasis::normalized(a[0], a[1])).collect()
}

fn better(candidate: f64, incumbent: f64) -> bool {
    candidate > incumbent + TIE_TOL * incumbent.abs().max(1.0)
}

/// Maximizes `objective` over `n_qubits` independent projective bases.
pub fn maximize<F>(n_qubits: usize, spec: &SearchSpec, objective: F) -> Result<SearchResult>
where
    F: Fn(&[ProjectiveBasis]) -> Result<f64> + Sync,
{
    spec.validate()?;
    let dims = 2 * n_qubits;
    let per_qubit = spec.n_theta * spec.n_phi;
    let total = per_qubit.pow(n_qubits as u32);
    let (dt, dp) = (spec.theta_step(), spec.phi_step());

    let point = |mut idx: usize| -> Vec<f64> {
        let mut x = vec![0.0; dims];
        for q in (0..n_qubits).rev() {
            let local = idx % per_qubit;
            idx /= per_qubit;
            x[2 * q] = (local / spec.n_phi) as f64 * dt;
            x[2 * q + 1] = (local % spec.n_phi) as f64 * dp;
        }
        x
    };

    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|i| objective(&to_bases(&point(i))))
        .collect::<Result<Vec<_>>>()?;

    let mut best_idx = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if better(v, values[best_idx]) {
            best_idx = i;
        }
    }
    let mut x = point(best_idx);
    let mut best = values[best_idx];
    let mut trace = vec![(to_bases(&x), best)];

    let mut steps: Vec<f64> = (0..dims).map(|d| if d % 2 == 0 { dt } else { dp }).collect();
    for _ in 0..spec.refine_iterations {
        let mut moves = 0;
        loop {
            let mut improved = None;
            for d in 0..dims {
                for dir in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[d] += dir * steps[d];
                    if d % 2 == 0 {
                        y[d] = y[d].clamp(0.0, FRAC_PI_2);
                    } else {
                        y[d] = y[d].rem_euclid(2.0 * PI);
                    }
                    if y[d] == x[d] {
                        continue;
                    }
                    let v = objective(&to_bases(&y))?;
                    let incumbent = improved.as_ref().map_or(best, |(_, b)| *b);
                    if better(v, incumbent) {
                        improved = Some((y, v));
                    }
                }
            }
            match improved {
                Some((y, v)) if moves < MAX_MOVES_PER_LEVEL => {
                    x = y;
                    best = v;
                    moves += 1;
                    trace.push((to_bases(&x), best));
                }
                _ => break,
            }
        }
        for s in &mut steps {
            *s *= spec.refine_shrink;
        }
        if steps.iter().all(|&s| s < 1e-13) {
            break;
        }
    }

    Ok(SearchResult {
        bases: to_bases(&x),
        value: best,
        trace,
    })
}

/// Minimizes `objective`; the result carries the minimum value.
pub fn minimize<F>(n_qubits: usize, spec: &SearchSpec, objective: F) -> Result<SearchResult>
where
    F: Fn(&[ProjectiveBasis]) -> Result<f64> + Sync,
{
    let mut res = maximize(n_qubits, spec, |b| objective(b).map(|v| -v))?;
    res.value = -res.value;
    for (_, v) in &mut res.trace {
        *v = -*v;
    }
    Ok(res)
}
