//! Majorization `x ≺ y`, sub-majorization `x ≺_ω y` and super-majorization
//! `x ≺^ω y` between (possibly infinite) spectra.
//!
//! Conventions: `x ≺ y` means every prefix sum of `x` is at most the
//! matching prefix sum of `y` (and the totals agree); `x ≺^ω y` means
//! `E_k(x) ≥ E_k(y)` for every `k`. An inequality fails only when it is
//! violated by more than the tolerance.
//!
//! Indices beyond the scan depth `K` are handled by bounding the worst
//! possible violation there. Writing `ρ = E_k(x)/E_k(y)`, any violation at
//! `k > K` is at most `E_{K+1}(y) · (1 - ρ_K)` once the ratio is known to be
//! nondecreasing, and at most `E_{K+1}(y)` unconditionally.

mod stochastic;

use serde::{Deserialize, Serialize};

use crate::certify::ratio_nondecreasing_from;
use crate::numeric::{self, Precision};
use crate::spectrum::{SchmidtSpectrum, TailBudget};

pub use stochastic::{
    apply_doubly_stochastic, check_doubly_stochastic, sinkhorn_normalize, synthesize_t_transforms,
    StochasticWitness, TTransform,
};

/// Default tie tolerance for closed-form spectra.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default tie tolerance for spectra ingested from data.
pub const INGESTED_TOL: f64 = 1e-9;
/// Furthest the scan depth is extended to cover finite supports.
pub const MAX_AUTO_DEPTH: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `x ≺ y`
    Majorized,
    /// `x ≺_ω y`
    SubMajorized,
    /// `x ≺^ω y`
    SuperMajorized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Certified,
    /// The defining inequality fails at `index` by `margin > tol`.
    Refuted { index: usize, margin: f64 },
    Undecided { depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub relation: Relation,
    #[serde(flatten)]
    pub status: Status,
    /// Depth actually scanned.
    pub depth: usize,
}

impl MajorizationVerdict {
    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.status, Status::Refuted { .. })
    }
}

/// Decide `x ≺ y` (or a one-sided variant) with scan depth `depth`.
pub fn compare(
    x: &SchmidtSpectrum,
    y: &SchmidtSpectrum,
    relation: Relation,
    depth: usize,
    tol: f64,
) -> MajorizationVerdict {
    compare_scaled(x, 1.0, y, 1.0, relation, depth, tol, &TailBudget::default())
}

/// Depth needed to see every explicitly stored coefficient.
fn natural_depth(s: &SchmidtSpectrum) -> usize {
    if let Some(n) = s.support() {
        return n;
    }
    match s.kind() {
        crate::spectrum::Kind::Spliced(sp) => sp.head().len() + 1,
        crate::spectrum::Kind::Concentrated { .. } => 2,
        _ => 1,
    }
}

/// Compare `sx·x` against `sy·y`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn compare_scaled(
    x: &SchmidtSpectrum,
    sx: f64,
    y: &SchmidtSpectrum,
    sy: f64,
    relation: Relation,
    depth: usize,
    tol: f64,
    budget: &TailBudget,
) -> MajorizationVerdict {
    let depth = depth
        .max(1)
        .max(natural_depth(x).min(MAX_AUTO_DEPTH))
        .max(natural_depth(y).min(MAX_AUTO_DEPTH));
    let verdict = |status| MajorizationVerdict {
        relation,
        status,
        depth,
    };

    if x.same_as(y) && sx == sy {
        return verdict(Status::Certified);
    }

    let scan_x = x.scan(depth, budget);
    let scan_y = y.scan(depth, budget);

    // explicit indices
    match relation {
        Relation::Majorized | Relation::SubMajorized => {
            let px = numeric::prefix_sums(&scan_x.coefficients, Precision::Extended);
            let py = numeric::prefix_sums(&scan_y.coefficients, Precision::Extended);
            for k in 1..=depth {
                let margin = sx * px[k] - sy * py[k];
                if margin > tol {
                    return verdict(Status::Refuted { index: k, margin });
                }
            }
            if relation == Relation::Majorized {
                let tx = scan_x.tail(1);
                let ty = scan_y.tail(1);
                let gap = (sx * tx.lower - sy * ty.upper).max(sy * ty.lower - sx * tx.upper);
                if gap > tol {
                    return verdict(Status::Refuted { index: 0, margin: gap });
                }
            }
        }
        Relation::SuperMajorized => {
            let mut undecided = false;
            for k in 1..=depth {
                let ex = scan_x.tail(k);
                let ey = scan_y.tail(k);
                let margin = sy * ey.lower - sx * ex.upper;
                if margin > tol {
                    return verdict(Status::Refuted { index: k, margin });
                }
                if sy * ey.upper - sx * ex.lower > tol {
                    undecided = true;
                }
            }
            if undecided {
                return verdict(Status::Undecided { depth });
            }
        }
    }

    // indices beyond the scan: for unit totals the prefix condition at k is
    // the tail condition at k + 1, so all variants reduce to tails there
    let ey = scan_y.tail(depth + 1);
    let ex = scan_x.tail(depth + 1);
    let worst = if ey.upper == 0.0 {
        0.0
    } else if ratio_nondecreasing_from(x, y, depth + 1) {
        let ratio_lo = if ex.lower > 0.0 { ex.lower / ey.upper } else { 0.0 };
        sy * ey.upper * (1.0 - ratio_lo * sx / sy).max(0.0)
    } else {
        sy * ey.upper
    };
    if worst <= tol {
        return verdict(Status::Certified);
    }
    if relation == Relation::SubMajorized && sx * scan_x.tail(1).upper <= sy * (1.0 - ey.upper) {
        return verdict(Status::Certified);
    }

    // Not certified; when x's tail provably vanishes relative to y's, probe
    // deeper ranks for an explicit violation.
    if x.decay_class().faster_than(y.decay_class())
        && x.has_direct_access()
        && y.has_direct_access()
    {
        let mut k = (depth + 1).saturating_mul(2);
        while k < 1usize << 52 {
            let (_, xh) = x.ln_rank_tail(k, budget);
            let (yl, _) = y.ln_rank_tail(k, budget);
            let margin = sy * yl.exp() - sx * xh.exp();
            if margin > tol {
                let index = match relation {
                    Relation::SuperMajorized => k,
                    _ => k - 1,
                };
                return verdict(Status::Refuted { index, margin });
            }
            if yl.exp() * sy <= tol {
                break;
            }
            k = k.saturating_mul(2);
        }
    }
    verdict(Status::Undecided { depth })
}
