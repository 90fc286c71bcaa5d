//! Eventual monotonicity of tail ratios.
//!
//! With the hazard `a_k = λ_k / E_k` one has `E_{k+1} = (1 - a_k) E_k`, so
//! the ratio `E_k(x) / E_k(y)` is nondecreasing on `[K, ∞)` as soon as
//! `a_k(x) ≤ a_k(y)` for every `k ≥ K`. For the closed-form families the
//! hazard is bracketed by the integral test:
//!
//! * geometric: `a_k = 1 - q²` exactly;
//! * power law, `s = 1/r`: `(s-1)(n-½)^{s-1}/n^s ≤ a ≤ (s-1)/n`;
//! * log-corrected: `(t-1)(ln(n-½))^{t-1}/(n (ln n)^t) ≤ a ≤ (t-1)/(n ln n)`,
//!   the lower bounds coming from the midpoint rule on a convex summand.
//!
//! Each admissible pair reduces to a single inequality at `k = K` because
//! the upper bound of `x` falls at least as fast as the lower bound of `y`.

use crate::spectrum::{Kind, SchmidtSpectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Hazard {
    Geometric { q: f64 },
    Power { s: f64 },
    Log { t: f64 },
}

/// Resolve the closed-form family governing ranks `≥ k`, together with the
/// rank shift `E_j(spectrum) = E_{j + shift}(family)`.
fn leaf(s: &SchmidtSpectrum, k: usize) -> Option<(Hazard, usize)> {
    match s.kind() {
        Kind::Geometric { q } => Some((Hazard::Geometric { q: *q }, 0)),
        Kind::PowerLaw { r, .. } => Some((Hazard::Power { s: 1.0 / r }, 0)),
        Kind::LogPower { t, .. } => Some((Hazard::Log { t: *t }, 0)),
        // hazards of ν and μ agree from rank two on
        Kind::Concentrated { base, .. } if k >= 2 => leaf(base, k),
        Kind::Spliced(sp) => {
            let consumed = sp.consumed_by(k)?;
            if consumed >= k {
                return None;
            }
            let nonzero = sp.head().iter().filter(|v| **v > 0.0).count();
            let shift = sp.head().len() - nonzero;
            let (h, inner) = leaf(sp.source(), k + shift)?;
            Some((h, inner + shift))
        }
        _ => None,
    }
}

/// `k`-th rank's family index for the hazard formulas.
fn family_index(h: Hazard, rank: usize) -> f64 {
    match h {
        Hazard::Log { .. } => rank as f64 + 1.0,
        _ => rank as f64,
    }
}

/// True when `E_k(x) / E_k(y)` is provably nondecreasing for all ranks
/// `k ≥ from`.
pub(crate) fn ratio_nondecreasing_from(x: &SchmidtSpectrum, y: &SchmidtSpectrum, from: usize) -> bool {
    let from = from.max(1);
    if x.same_as(y) {
        return true;
    }
    let (Some((hx, sx)), Some((hy, sy))) = (leaf(x, from), leaf(y, from)) else {
        return false;
    };
    if hx == hy && sx == sy {
        // same family from here on: the ratio is constant
        return true;
    }
    // a shift moves x deeper into its own sequence, where its hazard upper
    // bound is smaller; the lower bound of y needs exact alignment unless
    // it is constant
    if sy != 0 && !matches!(hy, Hazard::Geometric { .. }) {
        return false;
    }
    let k = from as f64;
    match (hx, hy) {
        (Hazard::Geometric { q: qx }, Hazard::Geometric { q: qy }) => qx >= qy,
        (Hazard::Power { s }, Hazard::Geometric { q }) => (s - 1.0) / k <= 1.0 - q * q,
        (Hazard::Log { t }, Hazard::Geometric { q }) => {
            let n = family_index(hx, from);
            (t - 1.0) / (n * n.ln()) <= 1.0 - q * q
        }
        (Hazard::Power { s: s_x }, Hazard::Power { s: s_y }) => {
            let c = (1.0 - 0.5 / k).powf(s_y - 1.0);
            s_x - 1.0 <= (s_y - 1.0) * c
        }
        (Hazard::Log { t }, Hazard::Power { s }) => {
            // a_x ≤ (t-1)/(k ln(k+1)), a_y ≥ (s-1) c / k for all ranks ≥ K
            let c = (1.0 - 0.5 / k).powf(s - 1.0);
            (t - 1.0) / (k + 1.0).ln() <= (s - 1.0) * c
        }
        (Hazard::Log { t: t_x }, Hazard::Log { t: t_y }) => {
            let n = family_index(hy, from);
            let c = ((n - 0.5).ln() / n.ln()).powf(t_y - 1.0);
            t_x - 1.0 <= (t_y - 1.0) * c
        }
        _ => false,
    }
}
