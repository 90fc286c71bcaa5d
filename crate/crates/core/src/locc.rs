//! Deterministic (LOCC) conversion: the decision `λ ≺ μ` and an explicit
//! intermediate target `μ′` that is reachable exactly, lies within `ε` of
//! `μ` in trace distance, and differs from `λ` only on a finite block.
//!
//! `μ′` is laid out in construction order: a block copied from `μ`, a
//! finite adjustment block, then `λ` verbatim from the splice rank on.
//! Fidelities are taken with Schmidt bases aligned in that order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorization::{
    compare, synthesize_t_transforms, MajorizationVerdict, Relation, StochasticWitness, DEFAULT_TOL,
};
use crate::numeric::{self, Precision, Summer};
use crate::spectrum::{Kind, SchmidtSpectrum, TailBudget};

/// Trace distance between pure states never exceeds 2.
pub const EPSILON_MAX: f64 = 2.0;

/// Decide `|Ψ⟩ → |Φ⟩` under ε-LOCC, i.e. `λ ≺ μ`.
pub fn decide_locc(lambda: &SchmidtSpectrum, mu: &SchmidtSpectrum, depth: usize) -> MajorizationVerdict {
    compare(lambda, mu, Relation::Majorized, depth, DEFAULT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanCase {
    BothFinite,
    FiniteTarget,
    /// Head of `μ` followed directly by `λ`.
    InfiniteA,
    /// Head of `μ`, a plateau, then `λ`.
    InfiniteB,
}

/// One verified inequality `lhs ≤ rhs` (or the named verdict).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl TranscriptEntry {
    fn le(check: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        TranscriptEntry {
            check: check.into(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    fn verdict(check: impl Into<String>, v: &MajorizationVerdict) -> Self {
        TranscriptEntry {
            check: format!("{} ({:?} at depth {})", check.into(), v.status, v.depth),
            lhs: 0.0,
            rhs: 0.0,
            holds: v.is_certified(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConversionPlan {
    pub case: PlanCase,
    #[serde(rename = "N1")]
    pub n1: usize,
    #[serde(rename = "N2")]
    pub n2: usize,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// First rank of `μ′` copied from `λ`.
    pub splice_index: usize,
    pub delta: f64,
    pub distance_bound: f64,
    /// `μ′_1 ..= μ′_{splice_index - 1}` in construction order.
    pub head: Vec<f64>,
    pub plateau_value: Option<f64>,
    pub transcript: Vec<TranscriptEntry>,
    /// T-transform chain realising `λ → μ′` on the block before the splice.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<StochasticWitness>,
    #[serde(skip)]
    pub mu_prime: SchmidtSpectrum,
}

impl ConversionPlan {
    pub fn verified(&self) -> bool {
        self.transcript.iter().all(|t| t.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plans always serialise")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PlanOptions {
    /// Depth of the majorization re-checks.
    pub depth: usize,
    /// Largest index searched for `N1`, `N2`, `M`.
    pub search_budget: usize,
    /// Largest explicit block of `μ′`.
    pub max_head: usize,
    /// Largest block for which a T-transform witness is produced.
    pub max_witness: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            depth: 1000,
            search_budget: 1 << 24,
            max_head: 1 << 20,
            max_witness: 256,
        }
    }
}

/// Trace-distance bound `2√(1 - F²)` for the two pure states, with
/// `F ≥ Σ_{i ≤ K} √(μ_i μ′_i)` over sorted coefficients.
pub fn trace_distance_pure(mu: &SchmidtSpectrum, mu_prime: &SchmidtSpectrum, depth: usize) -> f64 {
    if mu.same_as(mu_prime) {
        return 0.0;
    }
    let a = mu.head(depth);
    let b = mu_prime.head(depth);
    let f = numeric::sum(a.iter().zip(&b).map(|(x, y)| (x * y).sqrt()), Precision::Extended);
    let f = (f * (1.0 - 4.0 * f64::EPSILON)).min(1.0);
    2.0 * (1.0 - f * f).max(0.0).sqrt()
}

/// Sequential access to the sorted coefficients of a spectrum.
struct Coefficients<'a> {
    s: &'a SchmidtSpectrum,
    cache: Vec<f64>,
}

impl<'a> Coefficients<'a> {
    fn new(s: &'a SchmidtSpectrum) -> Self {
        Coefficients { s, cache: Vec::new() }
    }

    /// `λ_k`, 1-based.
    fn get(&mut self, k: usize) -> f64 {
        if self.s.has_direct_access() {
            return self.s.rank_coefficient(k);
        }
        if k > self.cache.len() {
            self.cache = self.s.head((2 * k).max(1024));
        }
        self.cache[k - 1]
    }
}

/// Smallest `m ≥ lo` with `pred(m)`, for a monotone predicate.
fn first_true(lo: usize, budget: usize, what: &'static str, mut pred: impl FnMut(usize) -> bool) -> Result<usize> {
    if pred(lo) {
        return Ok(lo);
    }
    let mut bad = lo;
    let mut step = 1usize;
    let good = loop {
        let cand = bad.saturating_add(step);
        if cand > budget {
            if pred(budget) {
                break budget;
            }
            return Err(Error::BudgetExceeded { what, budget });
        }
        if pred(cand) {
            break cand;
        }
        bad = cand;
        step = step.saturating_mul(2);
    };
    let (mut bad, mut good) = (bad, good);
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Rank from which `k λ_k` is nonincreasing.
fn n_lambda_monotone_from(s: &SchmidtSpectrum) -> Option<usize> {
    match s.kind() {
        // d/dx x q^{2x} ≤ 0 once x ≥ 1/(-2 ln q)
        Kind::Geometric { q } => Some((1.0 / (-2.0 * q.ln())).ceil().max(1.0) as usize),
        Kind::PowerLaw { .. } | Kind::LogPower { .. } => Some(1),
        Kind::Concentrated { base, .. } => n_lambda_monotone_from(base).map(|n| n.max(2)),
        _ => None,
    }
}

/// Construct `μ′` with `λ ≺ μ′ ≺ μ` and trace distance at most `ε`.
pub fn build_intermediate(
    lambda: &SchmidtSpectrum,
    mu: &SchmidtSpectrum,
    epsilon: f64,
    options: &PlanOptions,
) -> Result<ConversionPlan> {
    if !(epsilon > 0.0 && epsilon < EPSILON_MAX) {
        return Err(Error::param("epsilon", epsilon, "must lie in (0, 2)"));
    }
    if lambda.same_as(mu) {
        let rank = mu.support();
        return Ok(ConversionPlan {
            case: if rank.is_some() { PlanCase::BothFinite } else { PlanCase::InfiniteA },
            n1: rank.unwrap_or(0),
            n2: rank.unwrap_or(0) + 1,
            m: None,
            splice_index: 1,
            delta: 0.0,
            distance_bound: 0.0,
            head: Vec::new(),
            plateau_value: None,
            transcript: vec![TranscriptEntry::le("λ = μ", 0.0, 0.0)],
            witness: None,
            mu_prime: mu.clone(),
        });
    }
    let decision = decide_locc(lambda, mu, options.depth);
    if !decision.is_certified() {
        return Err(Error::NotConvertible(format!(
            "λ ≺ μ is not certified: {:?}",
            decision.status
        )));
    }
    let mut plan = match (lambda.support(), mu.support()) {
        (Some(_), Some(_)) => both_finite(lambda, mu, options)?,
        (None, Some(n)) => finite_target(lambda, mu, n, epsilon, options)?,
        (None, None) => infinite(lambda, mu, epsilon, options)?,
        (Some(_), None) => {
            return Err(Error::NotConvertible(
                "a finite-rank state cannot majorize into an infinite-rank target".into(),
            ))
        }
    };
    plan.transcript.insert(0, TranscriptEntry::verdict("λ ≺ μ", &decision));
    verify(lambda, mu, &mut plan, epsilon, options);
    Ok(plan)
}

fn both_finite(lambda: &SchmidtSpectrum, mu: &SchmidtSpectrum, options: &PlanOptions) -> Result<ConversionPlan> {
    let rank = mu.support().expect("finite target");
    let n = rank.max(lambda.support().expect("finite source"));
    let witness = if n <= options.max_witness {
        synthesize_t_transforms(&lambda.head(n), &mu.head(n)).ok()
    } else {
        None
    };
    Ok(ConversionPlan {
        case: PlanCase::BothFinite,
        n1: rank,
        n2: rank,
        m: None,
        splice_index: rank + 1,
        delta: 0.0,
        distance_bound: 0.0,
        head: mu.head(rank),
        plateau_value: None,
        transcript: Vec::new(),
        witness,
        mu_prime: mu.clone(),
    })
}

fn finite_target(
    lambda: &SchmidtSpectrum,
    mu: &SchmidtSpectrum,
    n: usize,
    epsilon: f64,
    options: &PlanOptions,
) -> Result<ConversionPlan> {
    let budget = TailBudget::default();
    let mu_vals = mu.head(n);
    let mu_n = mu_vals[n - 1];
    if epsilon >= mu_n {
        return Err(Error::PreconditionViolated(format!(
            "ε = {epsilon} must be smaller than the last target coefficient μ_N = {mu_n}"
        )));
    }
    let start = n_lambda_monotone_from(lambda).ok_or_else(|| {
        Error::Unsupported("no monotonicity certificate for k·λ_k on this source".into())
    })?;
    let mut coeffs = Coefficients::new(lambda);
    let half = 0.5 * epsilon;

    // N1: one past the last k with k λ_k ≥ ε/2; past `start` the sequence
    // is nonincreasing, so the scan stops at its first value below ε/2
    let mut last_bad = 0usize;
    let mut k = 1usize;
    loop {
        if k > options.search_budget {
            return Err(Error::BudgetExceeded {
                what: "N1",
                budget: options.search_budget,
            });
        }
        let v = k as f64 * coeffs.get(k);
        if v >= half {
            last_bad = k;
        } else if k >= start {
            break;
        }
        k += 1;
    }
    let n1 = last_bad + 1;
    let n2 = first_true(1, options.search_budget, "N2", |m| {
        lambda.rank_tail(m, &budget).upper < half
    })?;
    let m0 = n1.max(n2).max(n);

    let s_head = numeric::sum(mu_vals[..n - 1].iter().copied(), Precision::Extended);
    let shortfall = |m: usize, coeffs: &mut Coefficients| -> (f64, f64) {
        let lam_m = coeffs.get(m);
        let tail = lambda.rank_tail(m + 1, &budget);
        let base = (m - n) as f64 * lam_m;
        (base + tail.mid(), base + tail.upper)
    };
    let bound = |m: usize, coeffs: &mut Coefficients| -> f64 {
        let (_, hi) = shortfall(m, coeffs);
        let f = s_head + (mu_n * (mu_n - hi).max(0.0)).sqrt();
        let f = (f * (1.0 - 8.0 * f64::EPSILON)).min(1.0);
        2.0 * (1.0 - f * f).max(0.0).sqrt()
    };
    let limit = options.max_head.min(options.search_budget);
    let m = first_true(m0, limit, "M", |m| bound(m, &mut coeffs) <= epsilon)?;

    let (mid, _) = shortfall(m, &mut coeffs);
    let lam_m = coeffs.get(m);
    let mut head = mu_vals[..n - 1].to_vec();
    head.push(mu_n - mid);
    head.extend(std::iter::repeat(lam_m).take(m - n));
    let distance_bound = bound(m, &mut coeffs);
    let mu_prime = SchmidtSpectrum::spliced(head.clone(), lambda)?;
    let witness = if m <= options.max_witness {
        let mut block = head.clone();
        block.sort_by(|a, b| b.total_cmp(a));
        synthesize_t_transforms(&lambda.head(m), &block).ok()
    } else {
        None
    };
    let transcript = vec![
        TranscriptEntry::le("ε < μ_N", epsilon, mu_n),
        TranscriptEntry::le(format!("N1·λ_N1 < ε/2 (N1 = {n1})"), n1 as f64 * coeffs.get(n1), half),
        TranscriptEntry::le(
            format!("E_N2(λ) < ε/2 (N2 = {n2})"),
            lambda.rank_tail(n2, &budget).upper,
            half,
        ),
        TranscriptEntry::le("M ≥ max(N1, N2, N)", m0 as f64, m as f64),
        TranscriptEntry::le("μ′_N ≥ 0", 0.0, mu_n - mid),
    ];
    Ok(ConversionPlan {
        case: PlanCase::FiniteTarget,
        n1,
        n2,
        m: Some(m),
        splice_index: m + 1,
        delta: 0.0,
        distance_bound,
        head,
        plateau_value: Some(lam_m),
        transcript,
        witness,
        mu_prime,
    })
}

/// `N1 = min{m : 2√(2 E_{m+1}(μ)) ≤ ε}`.
pub fn infinite_n1(mu: &SchmidtSpectrum, epsilon: f64, budget: usize) -> Result<usize> {
    let tb = TailBudget::default();
    first_true(1, budget, "N1", |m| {
        2.0 * (2.0 * mu.rank_tail(m + 1, &tb).upper).sqrt() <= epsilon
    })
}

fn infinite(
    lambda: &SchmidtSpectrum,
    mu: &SchmidtSpectrum,
    epsilon: f64,
    options: &PlanOptions,
) -> Result<ConversionPlan> {
    let budget = TailBudget::default();
    let n1 = infinite_n1(mu, epsilon, options.search_budget)?;
    let mu_head = mu.head(n1);
    let s_mu = numeric::sum(mu_head.iter().copied(), Precision::Extended);
    let mut coeffs = Coefficients::new(lambda);

    // L(m) = S_m(λ) - (m - N1) λ_m is nondecreasing in m and tends to 1
    let mut s_lam = Summer::new(Precision::Extended);
    for k in 1..=n1 {
        s_lam.add(coeffs.get(k));
    }
    let mut n2 = n1 + 1;
    let (lhs, rhs_block) = loop {
        if n2 > options.search_budget.min(options.max_head) {
            return Err(Error::BudgetExceeded {
                what: "N2",
                budget: options.search_budget.min(options.max_head),
            });
        }
        let lam = coeffs.get(n2);
        let before = s_lam.value();
        s_lam.add(lam);
        let plateau = (n2 - n1 - 1) as f64 * lam;
        // L(N2) = S_{N2-1}(λ) - (N2 - N1 - 1) λ_{N2}
        let l = before - plateau;
        if l >= s_mu {
            break (before, plateau);
        }
        n2 += 1;
    };

    let lam_n2 = coeffs.get(n2);
    let width = n2 - n1 - 1;
    let mut head = mu_head.clone();
    let (case, delta, plateau_value) = if width == 0 {
        (PlanCase::InfiniteA, 0.0, None)
    } else {
        let delta = (lhs - rhs_block - s_mu) / width as f64;
        assert!(delta >= 0.0, "minimality of N2 forces δ ≥ 0");
        let v = lam_n2 + delta;
        head.extend(std::iter::repeat(v).take(width));
        (PlanCase::InfiniteB, delta, Some(v))
    };
    let e = mu.rank_tail(n1 + 1, &budget).upper;
    let distance_bound = 2.0 * (2.0 * e).sqrt();
    let mu_prime = SchmidtSpectrum::spliced(head.clone(), lambda)?;
    let witness = if n2 - 1 <= options.max_witness && n2 > 1 {
        let mut block = head.clone();
        block.sort_by(|a, b| b.total_cmp(a));
        synthesize_t_transforms(&lambda.head(n2 - 1), &block).ok()
    } else {
        None
    };
    let transcript = vec![
        TranscriptEntry::le(format!("2√(2·E_(N1+1)(μ)) ≤ ε (N1 = {n1})"), distance_bound, epsilon),
        TranscriptEntry::le(
            format!("Σ_(i≤N1) μ_i ≤ Σ_(k≤N2) λ_k − (N2−N1)λ_N2 (N2 = {n2})"),
            s_mu,
            lhs - rhs_block,
        ),
        TranscriptEntry::le("δ ≥ 0", 0.0, delta),
    ];
    Ok(ConversionPlan {
        case,
        n1,
        n2,
        m: None,
        splice_index: n2,
        delta,
        distance_bound,
        head,
        plateau_value,
        transcript,
        witness,
        mu_prime,
    })
}

/// Re-run the sandwich checks and the normalisation on the finished plan.
fn verify(lambda: &SchmidtSpectrum, mu: &SchmidtSpectrum, plan: &mut ConversionPlan, epsilon: f64, options: &PlanOptions) {
    let lower = decide_locc(lambda, &plan.mu_prime, options.depth);
    let upper = decide_locc(&plan.mu_prime, mu, options.depth);
    plan.transcript.push(TranscriptEntry::verdict("λ ≺ μ′", &lower));
    plan.transcript.push(TranscriptEntry::verdict("μ′ ≺ μ", &upper));
    let total = plan.mu_prime.rank_tail(1, &TailBudget::default());
    plan.transcript.push(TranscriptEntry {
        check: "Σ μ′ = 1".into(),
        lhs: total.lower,
        rhs: total.upper,
        holds: (total.lower - 1.0).abs() <= 1e-9 && (total.upper - 1.0).abs() <= 1e-9,
    });
    plan.transcript
        .push(TranscriptEntry::le("distance bound ≤ ε", plan.distance_bound, epsilon));
}
