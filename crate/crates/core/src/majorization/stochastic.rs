//! Finite doubly stochastic matrices and T-transform chains.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row/column sum tolerance for doubly stochastic inputs.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// `T = (1 - w) I + w P_{ij}`, mixing coordinates `i < j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTransform {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

impl TTransform {
    pub fn apply(&self, v: &mut [f64]) {
        let (a, b) = (v[self.i], v[self.j]);
        v[self.i] = (1.0 - self.weight) * a + self.weight * b;
        v[self.j] = self.weight * a + (1.0 - self.weight) * b;
    }

    /// `self · m`: mixes rows `i` and `j` of `m`.
    fn left_multiply(&self, m: &mut [Vec<f64>]) {
        let w = self.weight;
        for c in 0..m.len() {
            let (a, b) = (m[self.i][c], m[self.j][c]);
            m[self.i][c] = (1.0 - w) * a + w * b;
            m[self.j][c] = w * a + (1.0 - w) * b;
        }
    }
}

/// A doubly stochastic `D = T_m ⋯ T_1` with `x = D y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticWitness {
    pub matrix: Vec<Vec<f64>>,
    /// Factors in application order: `T_1` first.
    pub factors: Vec<TTransform>,
}

impl StochasticWitness {
    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    /// Apply the factors in order to `y`.
    pub fn apply_factors(&self, y: &[f64]) -> Vec<f64> {
        let mut v = y.to_vec();
        for t in &self.factors {
            t.apply(&mut v);
        }
        v
    }

    /// The factor product recomputed from scratch.
    pub fn factor_product(&self) -> Vec<Vec<f64>> {
        let mut m = identity(self.dimension());
        for t in &self.factors {
            t.left_multiply(&mut m);
        }
        m
    }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Largest deviation of a row or column sum from one, or an error for
/// non-square / negative input.
pub fn check_doubly_stochastic(d: &[Vec<f64>]) -> Result<f64> {
    let n = d.len();
    let mut worst = 0.0f64;
    let mut cols = vec![0.0; n];
    for (r, row) in d.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: row.len(),
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < -STOCHASTIC_TOL {
                return Err(Error::NotDoublyStochastic(format!(
                    "entry ({r}, {c}) = {v} is negative"
                )));
            }
            cols[c] += v;
        }
        worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
    }
    for c in cols {
        worst = worst.max((c - 1.0).abs());
    }
    Ok(worst)
}

/// `D x` for a doubly stochastic `D`; the result is majorized by `x`.
pub fn apply_doubly_stochastic(d: &[Vec<f64>], x: &[f64]) -> Result<Vec<f64>> {
    if d.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: d.len(),
        });
    }
    let dev = check_doubly_stochastic(d)?;
    if dev > STOCHASTIC_TOL {
        return Err(Error::NotDoublyStochastic(format!(
            "a row or column sum deviates from 1 by {dev:e}"
        )));
    }
    Ok(d.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect())
}

/// Alternately rescale rows and columns of a positive matrix until it is
/// doubly stochastic within `tol`.
pub fn sinkhorn_normalize(m: &[Vec<f64>], tol: f64, max_iter: usize) -> Result<Vec<Vec<f64>>> {
    let n = m.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut d = m.to_vec();
    for row in &d {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: row.len(),
            });
        }
        if row.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::PreconditionViolated(
                "Sinkhorn scaling needs strictly positive entries".into(),
            ));
        }
    }
    for _ in 0..max_iter {
        for row in d.iter_mut() {
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= s);
        }
        for c in 0..n {
            let s: f64 = d.iter().map(|row| row[c]).sum();
            d.iter_mut().for_each(|row| row[c] /= s);
        }
        if check_doubly_stochastic(&d)? <= tol {
            return Ok(d);
        }
    }
    Err(Error::BudgetExceeded {
        what: "a doubly stochastic scaling",
        budget: max_iter,
    })
}

/// Hardy–Littlewood–Pólya chain: at most `n - 1` T-transforms carrying `y`
/// to `x`, for sorted `x ≺ y`.
///
/// Each step picks the last coordinate `j` where the current vector still
/// exceeds `x` and the first later coordinate `k` where it falls short, and
/// moves `δ = min(z_j - x_j, x_k - z_k)` of mass between them; one of the
/// two coordinates then agrees with `x` for good.
pub fn synthesize_t_transforms(x: &[f64], y: &[f64]) -> Result<StochasticWitness> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: y.len(),
        });
    }
    let sorted = |v: &[f64]| v.windows(2).all(|w| w[0] >= w[1]);
    if !sorted(x) || !sorted(y) {
        return Err(Error::PreconditionViolated(
            "both vectors must be sorted nonincreasingly".into(),
        ));
    }
    let scale = y.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
    let tol = 1e-12 * scale;
    let (mut px, mut py) = (0.0, 0.0);
    for k in 0..n {
        px += x[k];
        py += y[k];
        if px - py > tol {
            return Err(Error::NotMajorized {
                index: k + 1,
                margin: px - py,
            });
        }
    }
    if (px - py).abs() > tol {
        return Err(Error::NotMajorized {
            index: n,
            margin: px - py,
        });
    }

    let eps = 1e-15 * scale;
    let mut z = y.to_vec();
    let mut factors = Vec::new();
    let mut matrix = identity(n);
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&j| z[j] - x[j] > eps) else {
            break;
        };
        let Some(k) = (j + 1..n).find(|&k| x[k] - z[k] > eps) else {
            break;
        };
        let delta = (z[j] - x[j]).min(x[k] - z[k]);
        let t = TTransform {
            i: j,
            j: k,
            weight: (delta / (z[j] - z[k])).clamp(0.0, 1.0),
        };
        t.apply(&mut z);
        // snap the coordinate that reached its target
        if z[j] - x[j] <= x[k] - z[k] {
            z[j] = x[j];
        } else {
            z[k] = x[k];
        }
        t.left_multiply(&mut matrix);
        factors.push(t);
    }
    Ok(StochasticWitness { matrix, factors })
}
