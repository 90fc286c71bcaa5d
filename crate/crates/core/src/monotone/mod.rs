//! Family-relative extended Schmidt ranks `R^±`.
//!
//! For a rate family `f_r`, `R^+` is the smallest `r` with
//! `E_n / f_r(n) → 0` and `R^-` the smallest with `liminf E_n / f_r(n) = 0`.
//! When the spectrum's decay class is known the values follow in closed
//! form; otherwise a bisection over `r` classifies the trend of
//! `g(n) = E_n / f_r(n)` on a geometric grid in log space.

mod inhibition;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::log_add_exp;
use crate::slocc::{max_probability, ProbabilityStatus, ProbabilityVerdict};
use crate::spectrum::{DecayClass, Kind, SchmidtSpectrum, TailBudget};

pub use inhibition::{check_inhibition, rank_sum, AsymptoticCheck, InhibitionReport};

type RateFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    /// `f_r(n) = n^{-(1/r - 1)}`
    Power,
    /// `f_q(n) = q^{2n}`
    Squeeze,
    Custom {
        ln_f: RateFn,
        ln_neg_derivative: Option<RateFn>,
    },
}

/// A one-parameter comparison family `f_r(n)`, `r ∈ (a, b)`.
#[derive(Clone)]
pub struct RateFamily {
    name: String,
    interval: (f64, f64),
    shape: Shape,
}

impl fmt::Debug for RateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RateFamily")
            .field("name", &self.name)
            .field("interval", &self.interval)
            .finish()
    }
}

/// Outcome of one validity spot check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityWitness {
    pub condition: String,
    /// `(n, value)` samples supporting the verdict.
    pub samples: Vec<(f64, f64)>,
    pub holds: bool,
}

const GRID: [f64; 3] = [1e3, 1e6, 1e9];
const ENUMERATION_REACH: f64 = 1e5;
const EVIDENCE_REACH: f64 = 1e4;

impl RateFamily {
    pub fn power() -> Self {
        RateFamily {
            name: "power".into(),
            interval: (0.0, 1.0),
            shape: Shape::Power,
        }
    }

    pub fn squeeze() -> Self {
        RateFamily {
            name: "squeeze".into(),
            interval: (0.0, 1.0),
            shape: Shape::Squeeze,
        }
    }

    /// A user family given by `ln f_r(x)` and, optionally, `ln(-f_r'(x))`
    /// (needed for reference states).
    pub fn custom(
        name: impl Into<String>,
        interval: (f64, f64),
        ln_f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        ln_neg_derivative: Option<Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>>,
    ) -> Result<Self> {
        let family = RateFamily {
            name: name.into(),
            interval,
            shape: Shape::Custom {
                ln_f: Arc::new(ln_f),
                ln_neg_derivative,
            },
        };
        if !(interval.0 < interval.1) {
            return Err(Error::InvalidFamily(format!("empty interval {interval:?}")));
        }
        if let Some(w) = family.validity().into_iter().find(|w| !w.holds) {
            return Err(Error::InvalidFamily(format!(
                "{} fails: {}",
                family.name, w.condition
            )));
        }
        Ok(family)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    fn check(&self, r: f64) -> Result<()> {
        if r > self.interval.0 && r < self.interval.1 {
            Ok(())
        } else {
            Err(Error::param("r", r, "must lie inside the family's parameter interval"))
        }
    }

    /// `ln f_r(x)`.
    pub fn ln_eval(&self, r: f64, x: f64) -> f64 {
        match &self.shape {
            Shape::Power => -(1.0 / r - 1.0) * x.ln(),
            Shape::Squeeze => 2.0 * x * r.ln(),
            Shape::Custom { ln_f, .. } => ln_f(r, x),
        }
    }

    pub fn eval(&self, r: f64, n: f64) -> f64 {
        self.ln_eval(r, n).exp()
    }

    /// `ln(-f_r'(x))`, if the family provides a derivative.
    pub fn ln_neg_derivative(&self, r: f64, x: f64) -> Option<f64> {
        match &self.shape {
            Shape::Power => Some((1.0 / r - 1.0).ln() - (1.0 / r) * x.ln()),
            Shape::Squeeze => Some((-2.0 * r.ln()).ln() + 2.0 * x * r.ln()),
            Shape::Custom {
                ln_neg_derivative, ..
            } => ln_neg_derivative.as_ref().map(|d| d(r, x)),
        }
    }

    /// `f_r'(x)`.
    pub fn derivative(&self, r: f64, x: f64) -> Option<f64> {
        self.ln_neg_derivative(r, x).map(|v| -v.exp())
    }

    /// Spot checks of monotone decrease, convexity and the cross-ratio
    /// condition `f_{r1}(n)/f_{r2}(n + m) → 0` for `r1 < r2`.
    pub fn validity(&self) -> Vec<ValidityWitness> {
        let (a, b) = self.interval;
        let r1 = a + 0.3 * (b - a);
        let r2 = a + 0.6 * (b - a);
        let mut out = Vec::new();

        let samples: Vec<(f64, f64)> = GRID
            .iter()
            .map(|&n| (n, self.ln_eval(r2, n + 1.0) - self.ln_eval(r2, n)))
            .collect();
        out.push(ValidityWitness {
            condition: "f_r strictly decreasing".into(),
            holds: samples.iter().all(|(_, d)| *d < 0.0),
            samples,
        });

        // f(x-1) + f(x+1) ≥ 2 f(x), in log space
        let samples: Vec<(f64, f64)> = [2.0, 10.0, 1e3, 1e6]
            .iter()
            .map(|&x| {
                let lhs = log_add_exp(self.ln_eval(r2, x - 1.0), self.ln_eval(r2, x + 1.0));
                (x, lhs - (2f64.ln() + self.ln_eval(r2, x)))
            })
            .collect();
        out.push(ValidityWitness {
            condition: "f_r convex".into(),
            holds: samples.iter().all(|(_, d)| *d >= -1e-12),
            samples,
        });

        for m in [0.0, 1.0] {
            let samples: Vec<(f64, f64)> = GRID
                .iter()
                .map(|&n| (n, self.ln_eval(r1, n) - self.ln_eval(r2, n + m)))
                .collect();
            let decreasing = samples.windows(2).all(|w| w[1].1 < w[0].1);
            let small = samples[1].1 < 1e-3f64.ln();
            out.push(ValidityWitness {
                condition: format!("f_r1(n)/f_r2(n+{m}) → 0 for r1 < r2"),
                holds: decreasing && small,
                samples,
            });
        }
        out
    }
}

/// The two stock families.
pub fn stock_families() -> Vec<RateFamily> {
    vec![RateFamily::power(), RateFamily::squeeze()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    NumericBisection,
}

/// Sampled `ln E_n - ln f_r(n)` at the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidenceRow {
    pub n: f64,
    pub r: f64,
    pub ln_tail_lower: f64,
    pub ln_tail_upper: f64,
    pub ln_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneEstimate {
    pub r_minus: (f64, f64),
    pub r_plus: (f64, f64),
    pub method: Method,
    /// Set when a bracket stayed wider than the tolerance because the trend
    /// was not resolved.
    pub inconclusive: bool,
    pub evidence: Vec<EvidenceRow>,
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateOptions {
    pub n_max: f64,
    pub tol: f64,
    /// Trend threshold on `d ln g / d ln n` over the final two decades.
    pub slope_threshold: f64,
    pub cutoff: f64,
    /// Skip the closed-form table.
    pub force_numeric: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            n_max: 1e9,
            tol: 1e-3,
            slope_threshold: 0.5,
            cutoff: 1e-6,
            force_numeric: false,
        }
    }
}

/// Closed-form `R` for a decay class, if known.
fn analytic(s: &SchmidtSpectrum, family: &RateFamily) -> Option<f64> {
    use DecayClass::*;
    // the family's own reference states, without a round trip through rates
    match (&family.shape, s.kind()) {
        (Shape::Power, Kind::PowerLaw { r, .. }) => return Some(*r),
        (Shape::Squeeze, Kind::Geometric { q }) => return Some(*q),
        _ => {}
    }
    match (&family.shape, s.decay_class()) {
        (Shape::Power, FiniteRank { .. } | Exponential { .. } | StretchedExponential { .. }) => Some(0.0),
        (Shape::Power, Polynomial { exponent }) => Some(1.0 / (exponent + 1.0)),
        (Shape::Power, LogCorrected { .. }) => Some(1.0),
        (Shape::Squeeze, FiniteRank { .. }) => Some(0.0),
        (Shape::Squeeze, Exponential { rate }) => Some((0.5 * rate).exp()),
        (Shape::Squeeze, StretchedExponential { .. } | Polynomial { .. } | LogCorrected { .. }) => Some(1.0),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Vanishing,
    NonVanishing,
    Unclear,
}

/// `ln E_n` brackets on a grid of ranks, `-∞` past a finite support.
fn ln_tails(s: &SchmidtSpectrum, points: &[f64], budget: &TailBudget) -> Vec<(f64, (f64, f64))> {
    let past = |rank: usize| s.support().map_or(false, |m| rank > m);
    let ln = |t: crate::spectrum::TailInterval| (t.lower.ln(), t.upper.ln());
    let scan = (!s.has_direct_access()).then(|| {
        let far = points.iter().fold(1.0f64, |a, b| a.max(*b)) as usize;
        s.scan(far, budget)
    });
    points
        .iter()
        .map(|&n| {
            let rank = (n as usize).max(1);
            let v = if past(rank) {
                (f64::NEG_INFINITY, f64::NEG_INFINITY)
            } else if let Some(scan) = &scan {
                ln(scan.tail(rank))
            } else {
                s.ln_rank_tail(rank, budget)
            };
            (n, v)
        })
        .collect()
}

fn grid(n_max: f64) -> Vec<f64> {
    // four points per decade
    let steps = (4.0 * n_max.log10()).ceil() as i32;
    let mut g: Vec<f64> = (0..=steps)
        .map(|i| 10f64.powf(i as f64 / 4.0).round().min(n_max))
        .collect();
    g.dedup();
    g
}

fn classify(
    family: &RateFamily,
    r: f64,
    opts: &EstimateOptions,
    tails: &[(f64, (f64, f64))],
    pick_max: bool,
) -> Trend {
    let window: Vec<(f64, f64)> = tails
        .iter()
        .filter(|(n, _)| *n >= opts.n_max / 100.0)
        .map(|(n, (lo, hi))| {
            let v = if pick_max { *hi } else { *lo };
            (*n, v - family.ln_eval(r, *n))
        })
        .collect();
    let (first, last) = (window[0], window[window.len() - 1]);
    if last.1 == f64::NEG_INFINITY {
        return Trend::Vanishing;
    }
    let slope = (last.1 - first.1) / (last.0.ln() - first.0.ln());
    let extreme = if pick_max {
        window.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max)
    } else {
        window.iter().map(|w| w.1).fold(f64::INFINITY, f64::min)
    };
    if slope <= -opts.slope_threshold && extreme <= opts.cutoff.ln() {
        Trend::Vanishing
    } else if slope >= 0.0 {
        Trend::NonVanishing
    } else {
        Trend::Unclear
    }
}

/// Bisection for `[sup NonVanishing, inf Vanishing]`.
fn bisect_bracket(
    family: &RateFamily,
    opts: &EstimateOptions,
    tails: &[(f64, (f64, f64))],
    pick_max: bool,
) -> (f64, f64) {
    let (a, b) = family.interval;
    let trend = |r: f64| classify(family, r, opts, tails, pick_max);
    let edge = 1e-9 * (b - a);
    let hi = if trend(b - edge) != Trend::Vanishing {
        b
    } else if trend(a + edge) == Trend::Vanishing {
        a
    } else {
        let (mut lo, mut hi) = (a + edge, b - edge);
        while hi - lo > opts.tol {
            let mid = 0.5 * (lo + hi);
            if trend(mid) == Trend::Vanishing {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let lo = if trend(a + edge) != Trend::NonVanishing {
        a
    } else {
        let (mut lo, mut up) = (a + edge, hi.min(b - edge));
        if trend(up) == Trend::NonVanishing {
            lo = up;
        }
        while up - lo > opts.tol {
            let mid = 0.5 * (lo + up);
            if trend(mid) == Trend::NonVanishing {
                lo = mid;
            } else {
                up = mid;
            }
        }
        lo
    };
    (lo.min(hi), hi)
}

/// Estimate `R^-` and `R^+` of a spectrum relative to `family`.
#[allow(non_snake_case)]
pub fn estimate_R(s: &SchmidtSpectrum, family: &RateFamily, opts: &EstimateOptions) -> MonotoneEstimate {
    let budget = TailBudget::default();
    let evidence_at = |tails: &[(f64, (f64, f64))], r: f64| -> Vec<EvidenceRow> {
        tails
            .iter()
            .filter(|(n, _)| n.log10().fract() == 0.0)
            .map(|&(n, (lo, hi))| EvidenceRow {
                n,
                r,
                ln_tail_lower: lo,
                ln_tail_upper: hi,
                ln_ratio: 0.5 * (lo + hi) - family.ln_eval(r, n),
            })
            .collect()
    };
    // enumerated spectra cannot reach far ranks cheaply
    let mut opts = *opts;
    if !s.has_direct_access() {
        opts.n_max = opts.n_max.min(ENUMERATION_REACH);
    }

    if !opts.force_numeric {
        if let Some(r) = analytic(s, family) {
            let (a, b) = family.interval;
            let probe = (r + 0.05 * (b - a)).min(b - 1e-9);
            let reach = if s.has_direct_access() { opts.n_max } else { EVIDENCE_REACH };
            let tails = ln_tails(s, &grid(reach), &budget);
            return MonotoneEstimate {
                r_minus: (r, r),
                r_plus: (r, r),
                method: Method::Analytic,
                inconclusive: false,
                evidence: evidence_at(&tails, probe),
            };
        }
    }

    let tails = ln_tails(s, &grid(opts.n_max), &budget);
    let r_minus = bisect_bracket(family, &opts, &tails, false);
    let r_plus = bisect_bracket(family, &opts, &tails, true);
    let wide = |b: (f64, f64)| b.1 - b.0 > 2.0 * opts.tol;
    MonotoneEstimate {
        r_minus,
        r_plus,
        method: Method::NumericBisection,
        inconclusive: wide(r_minus) || wide(r_plus),
        evidence: evidence_at(&tails, r_plus.1.min(family.interval.1 - 1e-9)),
    }
}

/// The spectrum `λ_n ∝ -f_r'(n)` whose `R^±` equal `r`.
pub fn reference_state(family: &RateFamily, r: f64) -> Result<SchmidtSpectrum> {
    family.check(r)?;
    match &family.shape {
        Shape::Power => SchmidtSpectrum::power_law(r),
        Shape::Squeeze => SchmidtSpectrum::geometric(r),
        Shape::Custom {
            ln_f,
            ln_neg_derivative,
        } => {
            let Some(d) = ln_neg_derivative.clone() else {
                return Err(Error::InvalidFamily(format!(
                    "{} has no derivative",
                    family.name
                )));
            };
            if let Some(w) = family.validity().into_iter().find(|w| !w.holds) {
                return Err(Error::InvalidFamily(w.condition));
            }
            let f = ln_f.clone();
            SchmidtSpectrum::derived(family.name.clone(), r, move |x| d(r, x), move |x| f(r, x))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderVerdict {
    ConvertibleCertified,
    BlockedCertified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub verdict: OrderVerdict,
    pub psi: MonotoneEstimate,
    pub phi: MonotoneEstimate,
    /// `max_probability(Ψ → Φ)` for comparison.
    pub probability: ProbabilityVerdict,
    /// False if the probability verdict contradicts the order verdict.
    pub consistent: bool,
}

/// Order `Ψ` and `Φ` by their monotones.
pub fn order_check(
    psi: &SchmidtSpectrum,
    phi: &SchmidtSpectrum,
    family: &RateFamily,
    opts: &EstimateOptions,
) -> OrderReport {
    let ep = estimate_R(psi, family, opts);
    let ef = estimate_R(phi, family, opts);
    let verdict = if ef.r_plus.1 < ep.r_minus.0 {
        OrderVerdict::ConvertibleCertified
    } else if ep.r_plus.1 < ef.r_minus.0 {
        OrderVerdict::BlockedCertified
    } else {
        OrderVerdict::Inconclusive
    };
    let mut probability = max_probability(psi, phi, 1000);
    probability.ratios.truncate(16);
    let consistent = match verdict {
        OrderVerdict::ConvertibleCertified => probability.status != ProbabilityStatus::CertifiedZero,
        OrderVerdict::BlockedCertified => probability.p_lower == 0.0,
        OrderVerdict::Inconclusive => true,
    };
    OrderReport {
        verdict,
        psi: ep,
        phi: ef,
        probability,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_family_values() {
        assert!((RateFamily::power().eval(0.5, 4.0) - 0.25).abs() < 1e-15);
        assert!((RateFamily::squeeze().eval(0.5, 2.0) - 0.0625).abs() < 1e-15);
        for f in stock_families() {
            assert!(f.validity().iter().all(|w| w.holds), "{f:?}");
        }
    }

    #[test]
    fn power_cross_ratio() {
        let f = RateFamily::power();
        let at = |n: f64| f.eval(0.3, n) / f.eval(0.6, n);
        assert!(at(1e6) < 1e-3 && at(1e9) < at(1e6) && at(1e6) < at(1e3));
    }

    #[test]
    fn analytic_recovery() {
        let o = EstimateOptions::default();
        let e = estimate_R(&SchmidtSpectrum::power_law(0.5).unwrap(), &RateFamily::power(), &o);
        assert_eq!((e.r_minus, e.r_plus), ((0.5, 0.5), (0.5, 0.5)));
        let g = SchmidtSpectrum::geometric(0.5).unwrap();
        assert_eq!(estimate_R(&g, &RateFamily::power(), &o).r_plus, (0.0, 0.0));
        let sq = estimate_R(&g, &RateFamily::squeeze(), &o);
        assert!((sq.r_plus.0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn numeric_brackets_contain_truth() {
        let o = EstimateOptions {
            force_numeric: true,
            ..EstimateOptions::default()
        };
        let e = estimate_R(&SchmidtSpectrum::power_law(0.5).unwrap(), &RateFamily::power(), &o);
        assert_eq!(e.method, Method::NumericBisection);
        assert!(e.r_plus.0 <= 0.5 + 1e-3 && 0.5 <= e.r_plus.1 + 1e-3, "{e:?}");
        assert!(e.r_minus.1 <= e.r_plus.1 + 1e-3);
        let g = estimate_R(&SchmidtSpectrum::geometric(0.5).unwrap(), &RateFamily::squeeze(), &o);
        assert!(g.r_plus.0 <= 0.5 + 1e-3 && 0.5 <= g.r_plus.1 + 1e-3, "{g:?}");
    }

    #[test]
    fn reference_states() {
        let p = reference_state(&RateFamily::power(), 0.5).unwrap();
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((p.rank_coefficient(3) - 1.0 / (9.0 * zeta2)).abs() < 1e-12);
        let q = reference_state(&RateFamily::squeeze(), 0.4).unwrap();
        assert_eq!(q, SchmidtSpectrum::geometric(0.4).unwrap());
        assert!(reference_state(&RateFamily::power(), 1.0).is_err());
    }

    #[test]
    fn custom_family_reference_state() {
        // f_r(x) = x^{-(1/r - 1)} written by hand
        let fam = RateFamily::custom(
            "manual power",
            (0.0, 1.0),
            |r, x| -(1.0 / r - 1.0) * x.ln(),
            Some(Arc::new(|r: f64, x: f64| (1.0 / r - 1.0).ln() - x.ln() / r)),
        )
        .unwrap();
        let s = reference_state(&fam, 0.5).unwrap();
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((s.rank_coefficient(1) - 1.0 / zeta2).abs() < 1e-9);
        let bare = RateFamily::custom("no derivative", (0.0, 1.0), |r, x| -(1.0 / r - 1.0) * x.ln(), None).unwrap();
        assert!(matches!(reference_state(&bare, 0.5), Err(Error::InvalidFamily(_))));
        let rising = RateFamily::custom("rising", (0.0, 1.0), |r, x| r * x.ln(), None);
        assert!(rising.is_err());
    }

    #[test]
    fn order_examples() {
        let o = EstimateOptions::default();
        let fam = RateFamily::power();
        let p9 = SchmidtSpectrum::power_law(0.9).unwrap();
        let g = SchmidtSpectrum::geometric(0.99).unwrap();
        let r = order_check(&p9, &g, &fam, &o);
        assert_eq!(r.verdict, OrderVerdict::ConvertibleCertified);
        assert!(r.consistent);
        let r = order_check(&g, &SchmidtSpectrum::power_law(0.1).unwrap(), &fam, &o);
        assert_eq!(r.verdict, OrderVerdict::BlockedCertified);
        assert!(r.consistent);
        assert_eq!(order_check(&p9, &p9.clone(), &fam, &o).verdict, OrderVerdict::Inconclusive);
    }
}
