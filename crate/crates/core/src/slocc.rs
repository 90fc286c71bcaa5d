//! Probabilistic (SLOCC) conversion: the optimal success probability
//! `p* = inf_n E_n(λ)/E_n(μ)`, the intermediate spectrum `ν` and the local
//! filter that realises it.

use serde::{Deserialize, Serialize};

use crate::certify::ratio_nondecreasing_from;
use crate::error::{Error, Result};
use crate::majorization::{compare_scaled, MajorizationVerdict, Relation, DEFAULT_TOL};
use crate::numeric::{self, Precision};
use crate::spectrum::{SchmidtSpectrum, TailBudget, TailInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityStatus {
    /// The infimum is attained within the scan and enclosed by the bracket.
    Exact,
    /// `p*` lies in the bracket; indices beyond the scan are unresolved.
    Bracketed,
    /// `E_n(λ)/E_n(μ) → 0`, so `p* = 0`.
    CertifiedZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    pub lambda_tail: TailInterval,
    pub mu_tail: TailInterval,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVerdict {
    pub p_lower: f64,
    pub p_upper: f64,
    /// Rank where the smallest scanned ratio occurs.
    pub witness_index: usize,
    pub status: ProbabilityStatus,
    pub ratios: Vec<RatioRow>,
}

/// Optimal probability of `|Ψ⟩ → |Φ⟩` by SLOCC, scanning ranks `≤ depth + 1`.
pub fn max_probability(lambda: &SchmidtSpectrum, mu: &SchmidtSpectrum, depth: usize) -> ProbabilityVerdict {
    let budget = TailBudget::default();
    let depth = match mu.support() {
        Some(n) => depth.max(n),
        None => depth.max(1),
    };
    if lambda.same_as(mu) {
        let one = TailInterval::exact(1.0);
        return ProbabilityVerdict {
            p_lower: 1.0,
            p_upper: 1.0,
            witness_index: 1,
            status: ProbabilityStatus::Exact,
            ratios: vec![RatioRow {
                n: 1,
                lambda_tail: one,
                mu_tail: one,
                ratio_lower: 1.0,
                ratio_upper: 1.0,
            }],
        };
    }

    let sl = lambda.scan(depth, &budget);
    let sm = mu.scan(depth, &budget);
    let mut ratios = Vec::new();
    let (mut p_lower, mut p_upper, mut witness) = (f64::INFINITY, f64::INFINITY, 1usize);
    for n in 1..=depth + 1 {
        let (el, em) = (sl.tail(n), sm.tail(n));
        if em.upper == 0.0 {
            break;
        }
        let lo = el.lower / em.upper;
        let hi = if em.lower > 0.0 { el.upper / em.lower } else { f64::INFINITY };
        if hi < p_upper {
            p_upper = hi;
            witness = n;
        }
        p_lower = p_lower.min(lo);
        ratios.push(RatioRow {
            n,
            lambda_tail: el,
            mu_tail: em,
            ratio_lower: lo,
            ratio_upper: hi,
        });
    }
    let p_upper = p_upper.min(1.0);
    let p_lower = p_lower.min(p_upper);

    let covered = mu.support().map_or(false, |n| n <= depth + 1);
    let (status, p_lower, p_upper) = if covered || ratio_nondecreasing_from(lambda, mu, depth + 1) {
        (ProbabilityStatus::Exact, p_lower, p_upper)
    } else if lambda.decay_class().faster_than(mu.decay_class()) {
        (ProbabilityStatus::CertifiedZero, 0.0, 0.0)
    } else {
        (ProbabilityStatus::Bracketed, 0.0, p_upper)
    };
    ProbabilityVerdict {
        p_lower,
        p_upper,
        witness_index: witness,
        status,
        ratios,
    }
}

/// `ν_1 = 1 - p(1 - μ_1)`, `ν_i = p μ_i` for `i ≥ 2`.
pub fn nu_spectrum(mu: &SchmidtSpectrum, p: f64) -> Result<SchmidtSpectrum> {
    let nu = SchmidtSpectrum::concentrated(mu, p)?;
    debug_assert!(nu.rank_coefficient(1) >= mu.rank_coefficient(1));
    Ok(nu)
}

/// Diagonal filter `√(ν_i/μ_i)` rescaled by its largest entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    pub max_entry: f64,
    /// `Σ_i ν_i / max_entry²`.
    pub success_probability: f64,
}

pub fn filter_coefficients(mu: &SchmidtSpectrum, nu: &SchmidtSpectrum, depth: usize) -> Result<FilterReport> {
    let depth = depth.max(1);
    let m = mu.head(depth);
    let v = nu.head(depth);
    let mut raw = Vec::with_capacity(depth);
    for (i, (&mi, &vi)) in m.iter().zip(&v).enumerate() {
        if mi <= 0.0 {
            if vi > 0.0 {
                return Err(Error::PreconditionViolated(format!(
                    "μ_{} = 0 while ν_{} > 0",
                    i + 1,
                    i + 1
                )));
            }
            break;
        }
        raw.push((vi / mi).sqrt());
    }
    let max_entry = raw.iter().copied().fold(0.0, f64::max);
    let normalized = raw.iter().map(|r| r / max_entry).collect();
    let tail = nu.rank_tail(raw.len() + 1, &TailBudget::default()).mid();
    let mass = numeric::sum(v[..raw.len()].iter().copied(), Precision::Extended) + tail;
    Ok(FilterReport {
        raw,
        normalized,
        max_entry,
        success_probability: mass / (max_entry * max_entry),
    })
}

/// Filter taking the `ν` state to the `μ` state with probability `p`:
/// entries `√(p μ_i / ν_i)`, which equal 1 from the second on.
pub fn target_filter(mu: &SchmidtSpectrum, p: f64, depth: usize) -> Result<Vec<f64>> {
    let nu = nu_spectrum(mu, p)?;
    Ok(mu
        .head(depth.max(1))
        .iter()
        .zip(nu.head(depth.max(1)))
        .take_while(|(m, _)| **m > 0.0)
        .map(|(m, n)| (p * m / n).sqrt().min(1.0))
        .collect())
}

/// `λ ≺^ω p μ`: tails of `λ` dominate `p` times those of `μ`.
pub fn check_p_convertibility(
    lambda: &SchmidtSpectrum,
    mu: &SchmidtSpectrum,
    p: f64,
    depth: usize,
) -> Result<MajorizationVerdict> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param("p", p, "must lie in (0, 1]"));
    }
    Ok(compare_scaled(
        lambda,
        1.0,
        mu,
        p,
        Relation::SuperMajorized,
        depth,
        DEFAULT_TOL,
        &TailBudget::default(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: &[f64]) -> SchmidtSpectrum {
        SchmidtSpectrum::finite(v.to_vec()).unwrap()
    }

    #[test]
    fn two_level_probability() {
        let v = max_probability(&fin(&[0.6, 0.4]), &fin(&[0.5, 0.5]), 10);
        assert_eq!(v.status, ProbabilityStatus::Exact);
        assert_eq!(v.witness_index, 2);
        assert!((v.p_lower - 0.8).abs() < 1e-12 && (v.p_upper - 0.8).abs() < 1e-12);
    }

    #[test]
    fn identical_states() {
        let g = SchmidtSpectrum::power_law(0.4).unwrap();
        let v = max_probability(&g, &g.clone(), 10);
        assert_eq!((v.p_lower, v.p_upper, v.status), (1.0, 1.0, ProbabilityStatus::Exact));
    }

    #[test]
    fn geometric_to_power_law_is_zero() {
        let v = max_probability(
            &SchmidtSpectrum::geometric(0.5).unwrap(),
            &SchmidtSpectrum::power_law(0.75).unwrap(),
            100,
        );
        assert_eq!(v.status, ProbabilityStatus::CertifiedZero);
        // independent bound q^{2(n-1)} · (a-1) ζ(a) n^{a-1}, a = 4/3, at n = 100
        let a = 4.0f64 / 3.0;
        let zeta_a: f64 = (1..200_000u64).map(|n| (n as f64).powf(-a)).sum::<f64>()
            + 200_000f64.powf(1.0 - a) / (a - 1.0);
        let bound = 0.25f64.powi(99) * (a - 1.0) * zeta_a * 100f64.powf(a - 1.0);
        assert!(v.ratios[99].ratio_upper <= bound * 1.01);
    }

    #[test]
    fn nu_examples() {
        let nu = nu_spectrum(&fin(&[0.5, 0.3, 0.2]), 0.5).unwrap();
        let v = nu.head(3);
        assert!((v[0] - 0.75).abs() < 1e-15 && (v[1] - 0.15).abs() < 1e-15 && (v[2] - 0.1).abs() < 1e-15);
        let g = SchmidtSpectrum::geometric(0.5).unwrap();
        assert_eq!(nu_spectrum(&g, 1.0).unwrap(), g);
        let ng = nu_spectrum(&g, 0.5).unwrap();
        assert!((ng.rank_coefficient(1) - 0.875).abs() < 1e-15);
        assert!((ng.rank_coefficient(3) - 0.5 * 0.75 * 0.25f64.powi(2)).abs() < 1e-15);
        assert!((ng.rank_tail(1, &TailBudget::default()).mid() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn filter_example() {
        let mu = fin(&[0.5, 0.3, 0.2]);
        let nu = nu_spectrum(&mu, 0.5).unwrap();
        let f = filter_coefficients(&mu, &nu, 3).unwrap();
        assert!((f.raw[0] - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((f.normalized[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let direct: f64 = nu.head(3).iter().map(|v| v / f.max_entry.powi(2)).sum();
        assert!((f.success_probability - direct).abs() < 1e-12);
    }

    #[test]
    fn p_convertibility_threshold() {
        let l = fin(&[0.6, 0.4]);
        let m = fin(&[0.5, 0.5]);
        assert!(check_p_convertibility(&l, &m, 0.8, 10).unwrap().is_certified());
        let bad = check_p_convertibility(&l, &m, 0.81, 10).unwrap();
        assert!(matches!(bad.status, crate::majorization::Status::Refuted { index: 2, .. }));
        let g = SchmidtSpectrum::geometric(0.3).unwrap();
        let p = SchmidtSpectrum::power_law(0.9).unwrap();
        assert!(check_p_convertibility(&g, &p, 1e-15, 10).unwrap().is_certified());
    }
}
