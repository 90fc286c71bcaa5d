//! Catalysis inhibition by copies of an exponentially decaying state.
//!
//! `p` copies of a state with amplitudes `e^{-r n}` have merged amplitudes
//! `f(k) = e^{-r s(k)}`, where `s(k)` is the index sum of the `k`-th largest
//! product. There are `C(S, p)` index tuples with sum `≤ S`, so
//! `s(k) = min{S : C(S, p) ≥ k}` and `f(k)` decays like `e^{-r (p! k)^{1/p}}`,
//! faster than any power of `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ln_factorial;
use crate::slocc::{max_probability, ProbabilityStatus, ProbabilityVerdict};
use crate::spectrum::{Kind, SchmidtSpectrum, TailBudget};

/// `C(n, p)` saturating at `u128::MAX`.
fn binomial(n: u64, p: u32) -> u128 {
    if (p as u64) > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..p as u64 {
        // exact at every step: acc = C(n, i) before the update
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `min{S : C(S, p) ≥ k}`, the index sum at merged rank `k`.
pub fn rank_sum(k: u128, p: u32) -> u64 {
    assert!(k >= 1 && p >= 1);
    let (mut lo, mut hi) = (p as u64, p as u64);
    while binomial(hi, p) < k {
        hi = hi.saturating_mul(2);
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if binomial(mid, p) >= k {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCheck {
    pub c: f64,
    /// `(k, ln f(k) + c ln k)` at `k = 10, 10², …`.
    pub samples: Vec<(f64, f64)>,
    /// Negative and decreasing at the far end of the grid.
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InhibitionReport {
    pub q: f64,
    /// Amplitude decay rate `r = -ln q`.
    pub rate: f64,
    pub copies: u32,
    /// `ln f(k)` for `k = 1..=K` from the merged enumeration.
    pub ln_amplitudes: Vec<f64>,
    pub rank_sums: Vec<u64>,
    /// Enumeration agrees with `e^{-r s(k)}` at every rank.
    pub rank_function_matches: bool,
    /// Ranks where `f(k) ≤ e^{-r((p! k)^{1/p} + 1)}` fails.
    pub bound_violations: Vec<usize>,
    pub asymptotic: Vec<AsymptoticCheck>,
    /// Upper bound on `E_{K+1}` of the copies over the lower bound on
    /// `E_{K+1}` of the target.
    pub tail_ratio_bound: f64,
    pub probability: ProbabilityVerdict,
    pub certified_zero: bool,
}

/// `E` over every tuple whose index sum is at least `s0`, normalized.
fn closed_tail_upper(q: f64, p: u32, s0: u64) -> f64 {
    let q2 = q * q;
    let ln_norm = p as f64 * (1.0 - q2).ln();
    let mut total = 0.0;
    let mut s = s0.max(p as u64);
    loop {
        let ln_count = crate::numeric::ln_binomial((s - 1) as f64, p - 1);
        let term = (ln_norm + ln_count + 2.0 * (s - p as u64) as f64 * q.ln()).exp();
        total += term;
        // successive terms shrink by q² s / (s - p + 1), which decreases in s
        let rho = q2 * s as f64 / (s + 1 - p as u64) as f64;
        if term == 0.0 || (rho < 0.5 && term <= total * 1e-17) {
            let rest = if term == 0.0 { 0.0 } else { term * rho / (1.0 - rho) };
            return total + rest;
        }
        s += 1;
    }
}

/// Enumerate `p` copies of a geometric base against the target `phi`.
pub fn check_inhibition(base: &SchmidtSpectrum, copies: u32, phi: &SchmidtSpectrum, depth: usize) -> Result<InhibitionReport> {
    let Kind::Geometric { q } = base.kind() else {
        return Err(Error::Unsupported("the inhibition check needs a geometric base".into()));
    };
    let q = *q;
    if copies < 1 {
        return Err(Error::param("copies", copies as f64, "must be at least 1"));
    }
    let depth = depth.max(1);
    let rate = -q.ln();
    let product = SchmidtSpectrum::tensor_power(base, copies)?;
    let pf = copies as f64;

    // coefficients (1-q²)^p q^{2(s-p)} → amplitudes q^s
    let shift = -0.5 * pf * (1.0 - q * q).ln() + pf * q.ln();
    let ln_coefficients: Vec<f64> = if copies == 1 {
        // a single copy underflows early in linear space
        (1..=depth).map(|k| base.ln_rank_coefficient(k)).collect()
    } else {
        product.head(depth).iter().map(|c| c.ln()).collect()
    };
    let ln_amplitudes: Vec<f64> = ln_coefficients.iter().map(|c| 0.5 * c + shift).collect();
    let rank_sums: Vec<u64> = (1..=depth as u128).map(|k| rank_sum(k, copies)).collect();
    let rank_function_matches = ln_amplitudes
        .iter()
        .zip(&rank_sums)
        .all(|(a, &s)| (a + rate * s as f64).abs() <= 1e-9 * (1.0 + rate * s as f64));

    let ln_pf = ln_factorial(copies);
    let bound_violations = ln_amplitudes
        .iter()
        .enumerate()
        .filter(|(i, a)| {
            let k = (i + 1) as f64;
            let bound = -rate * (((ln_pf + k.ln()) / pf).exp() + 1.0);
            **a > bound + 1e-9 * bound.abs()
        })
        .map(|(i, _)| i + 1)
        .collect();

    let asymptotic = [1.0, 2.0, 4.0]
        .iter()
        .map(|&c| {
            let samples: Vec<(f64, f64)> = (1..=15)
                .map(|j| {
                    let k = 10u128.pow(j);
                    let kf = k as f64;
                    (kf, -rate * rank_sum(k, copies) as f64 + c * kf.ln())
                })
                .collect();
            let tail = &samples[samples.len() - 3..];
            let vanishes = tail.iter().all(|s| s.1 < 0.0) && tail.windows(2).all(|w| w[1].1 < w[0].1);
            AsymptoticCheck { c, samples, vanishes }
        })
        .collect();

    let upper = closed_tail_upper(q, copies, rank_sums[depth - 1]);
    let lower = phi.rank_tail(depth + 1, &TailBudget::default()).lower;
    let tail_ratio_bound = upper / lower;

    let mut probability = max_probability(&product, phi, depth);
    let certified_zero = probability.status == ProbabilityStatus::CertifiedZero;
    probability.ratios.truncate(32);

    Ok(InhibitionReport {
        q,
        rate,
        copies,
        ln_amplitudes,
        rank_sums,
        rank_function_matches,
        bound_violations,
        asymptotic,
        tail_ratio_bound,
        probability,
        certified_zero,
    })
}
