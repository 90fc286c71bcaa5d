//! Schmidt-coefficient sequences.
//!
//! A [`SchmidtSpectrum`] is an immutable, cheaply clonable description of a
//! nonincreasing unit-sum sequence `λ_1 ≥ λ_2 ≥ ...`. Closed-form families
//! evaluate terms and tails directly; composites (tensor products, spliced
//! sequences) enumerate their sorted coefficients on demand.
//!
//! Two index conventions coexist. *Family indices* follow the closed form
//! (the log-corrected family starts at `n = 2`); *ranks* are 1-based
//! positions in the sorted sequence. All comparison code works with ranks.
//! [`SchmidtSpectrum::coefficient`] and [`SchmidtSpectrum::tail`] take family
//! indices; the `rank_*` methods take ranks.
//!
//! The squeezed-state family is normalised as `λ_n = (1 - q²) q^{2(n-1)}`.

mod class;
mod enumerate;
mod moment;
mod scan;
pub mod spec_file;
mod svd;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{self, Precision};
use crate::series::{Series, EXPLICIT_TERMS};

pub use class::DecayClass;
pub use moment::{MomentCertificate, MomentResult};
pub use scan::Scan;
pub use svd::{squared_singular_values, AmplitudeMatrix};

pub(crate) use enumerate::ProductEnumerator;

/// Tolerance on the total of a user supplied coefficient list.
pub const UNIT_SUM_TOLERANCE: f64 = 1e-6;

/// Certified enclosure of a tail sum `E_n = Σ_{i ≥ n} λ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailInterval {
    pub lower: f64,
    pub upper: f64,
    /// False when the evaluation budget ran out before `target_width`.
    pub converged: bool,
}

impl TailInterval {
    /// Point interval for closed forms and finite sums, exact up to the
    /// final rounding.
    pub fn exact(v: f64) -> Self {
        TailInterval {
            lower: v,
            upper: v,
            converged: true,
        }
    }

    pub fn new(lower: f64, upper: f64) -> Self {
        TailInterval {
            lower: lower.max(0.0),
            upper: upper.max(lower.max(0.0)),
            converged: true,
        }
    }

    pub fn zero() -> Self {
        TailInterval {
            lower: 0.0,
            upper: 0.0,
            converged: true,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    pub fn scale(&self, c: f64) -> Self {
        TailInterval {
            lower: self.lower * c,
            upper: self.upper * c,
            converged: self.converged,
        }
    }
}

/// Evaluation budget for tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBudget {
    /// Leading terms of the slowly decaying families summed explicitly.
    pub explicit_terms: u64,
    /// Extra products enumerated beyond the requested rank for composites.
    pub enumeration: usize,
    /// Width at which the interval counts as converged.
    pub target_width: Option<f64>,
    pub precision: Precision,
}

impl Default for TailBudget {
    fn default() -> Self {
        TailBudget {
            explicit_terms: EXPLICIT_TERMS,
            enumeration: 4096,
            target_width: None,
            precision: Precision::Double,
        }
    }
}

/// Sorted finite coefficient list with cached suffix sums.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSeq {
    values: Vec<f64>,
    suffix: Vec<f64>,
}

impl FiniteSeq {
    fn from_sorted(values: Vec<f64>) -> Self {
        let suffix = numeric::suffix_sums(&values, Precision::Extended);
        FiniteSeq { values, suffix }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Σ_{i ≥ k} v_i`, 1-based.
    fn tail(&self, k: usize) -> f64 {
        self.suffix
            .get(k.saturating_sub(1))
            .copied()
            .unwrap_or(0.0)
    }
}

/// A finite block of explicit coefficients followed by another spectrum
/// from a given rank on. The block keeps its construction order; ranks see
/// the canonical sorted rearrangement.
#[derive(Debug, Clone, PartialEq)]
pub struct Splice {
    head: Vec<f64>,
    head_sorted: Vec<f64>,
    source: SchmidtSpectrum,
}

impl Splice {
    /// Coefficients in construction order (unsorted).
    pub fn head(&self) -> &[f64] {
        &self.head
    }

    /// The spectrum supplying ranks `head.len() + 1, ...`.
    pub fn source(&self) -> &SchmidtSpectrum {
        &self.source
    }

    /// First rank taken from the source.
    pub fn splice_rank(&self) -> usize {
        self.head.len() + 1
    }
}

type LnFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Spectrum `λ_n = w(n)/c` built from a positive decreasing weight `w` with
/// known primitive `F(n) = Σ-free integral ∫_n^∞ w`.
#[derive(Clone)]
pub struct DerivedSeq {
    name: String,
    parameter: f64,
    ln_weight: LnFn,
    ln_primitive: LnFn,
    norm: (f64, f64),
}

impl fmt::Debug for DerivedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DerivedSeq")
            .field("name", &self.name)
            .field("parameter", &self.parameter)
            .field("norm", &self.norm)
            .finish()
    }
}

impl PartialEq for DerivedSeq {
    fn eq(&self, other: &Self) -> bool {
        self.parameter == other.parameter
            && Arc::ptr_eq(&self.ln_weight, &other.ln_weight)
            && Arc::ptr_eq(&self.ln_primitive, &other.ln_primitive)
    }
}

impl DerivedSeq {
    /// Unnormalised `Σ_{i ≥ n} w(i)`, explicit up to `cut` and bracketed by
    /// `[F(cut), F(cut) + w(cut)]` beyond.
    fn raw_tail(&self, n: u64, cut: u64, precision: Precision) -> (f64, f64) {
        let cut = cut.max(n);
        let head = numeric::sum((n..cut).map(|i| (self.ln_weight)(i as f64).exp()), precision);
        let f = (self.ln_primitive)(cut as f64).exp();
        let w = (self.ln_weight)(cut as f64).exp();
        numeric::widen(head + f, head + f + w)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }
}

/// Explicit cut-off used by derived spectra for their normalisation.
const DERIVED_EXPLICIT: u64 = 1 << 20;

/// The shape of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Finite(FiniteSeq),
    /// `λ_n = (1 - q²) q^{2(n-1)}`, `n ≥ 1`.
    Geometric { q: f64 },
    /// `λ_n = n^{-1/r} / ζ(1/r)`, `n ≥ 1`.
    PowerLaw { r: f64, zeta: (f64, f64) },
    /// `λ_n = 1 / (C_t n (ln n)^t)`, `n ≥ 2`.
    LogPower { t: f64, norm: (f64, f64) },
    TensorProduct {
        left: SchmidtSpectrum,
        right: SchmidtSpectrum,
    },
    TensorPower {
        base: SchmidtSpectrum,
        copies: u32,
    },
    /// The first `cutoff` coefficients of `base`, renormalised.
    TruncatedView {
        base: SchmidtSpectrum,
        cutoff: usize,
        dropped: TailInterval,
        values: FiniteSeq,
    },
    Spliced(Splice),
    /// `ν_1 = 1 - p(1 - μ_1)`, `ν_i = p μ_i` for `i ≥ 2`.
    Concentrated { base: SchmidtSpectrum, p: f64 },
    Derived(DerivedSeq),
}

/// An immutable Schmidt-coefficient sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum(Arc<Kind>);

fn check_open_unit(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, v, "must lie in (0, 1)"))
    }
}

impl SchmidtSpectrum {
    fn wrap(kind: Kind) -> Self {
        SchmidtSpectrum(Arc::new(kind))
    }

    pub fn kind(&self) -> &Kind {
        &self.0
    }

    /// Finite spectrum; values are sorted, zeros dropped and the total
    /// renormalised when it is within [`UNIT_SUM_TOLERANCE`] of one.
    pub fn finite(values: impl Into<Vec<f64>>) -> Result<Self> {
        let mut values: Vec<f64> = values.into();
        if values.is_empty() {
            return Err(Error::InvalidCoefficients("empty list".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidCoefficients(format!(
                "coefficient {bad} is not a finite nonnegative number"
            )));
        }
        let total = numeric::sum(values.iter().copied(), Precision::Extended);
        if (total - 1.0).abs() > UNIT_SUM_TOLERANCE {
            return Err(Error::InvalidCoefficients(format!(
                "coefficients sum to {total}, expected 1"
            )));
        }
        values.retain(|v| *v > 0.0);
        values.sort_by(|a, b| b.total_cmp(a));
        if total != 1.0 {
            for v in &mut values {
                *v /= total;
            }
        }
        Ok(Self::wrap(Kind::Finite(FiniteSeq::from_sorted(values))))
    }

    /// Finite spectrum from arbitrary nonnegative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total = numeric::sum(weights.iter().copied(), Precision::Extended);
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidCoefficients("weights have no positive mass".into()));
        }
        Self::finite(weights.iter().map(|w| w / total).collect::<Vec<_>>())
    }

    /// Two-mode squeezed state spectrum.
    pub fn geometric(q: f64) -> Result<Self> {
        check_open_unit("q", q)?;
        Ok(Self::wrap(Kind::Geometric { q }))
    }

    /// Zeta-normalised power law with amplitude exponent `1/(2r)`.
    pub fn power_law(r: f64) -> Result<Self> {
        check_open_unit("r", r)?;
        let zeta = Series::Power { s: 1.0 / r }.total();
        Ok(Self::wrap(Kind::PowerLaw { r, zeta }))
    }

    /// Log-corrected family; requires `t > 1` for summability.
    pub fn log_power(t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 1.0) {
            return Err(Error::param("t", t, "must exceed 1 for a normalisable spectrum"));
        }
        let norm = Series::Log { t }.total();
        Ok(Self::wrap(Kind::LogPower { t, norm }))
    }

    pub fn tensor(a: &SchmidtSpectrum, b: &SchmidtSpectrum) -> Self {
        Self::wrap(Kind::TensorProduct {
            left: a.clone(),
            right: b.clone(),
        })
    }

    pub fn tensor_power(base: &SchmidtSpectrum, copies: u32) -> Result<Self> {
        if copies == 0 {
            return Err(Error::param("copies", 0.0, "must be at least 1"));
        }
        if copies == 1 {
            return Ok(base.clone());
        }
        Ok(Self::wrap(Kind::TensorPower {
            base: base.clone(),
            copies,
        }))
    }

    /// The first `cutoff` coefficients of `base`, renormalised to unit sum.
    pub fn truncated(base: &SchmidtSpectrum, cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::param("cutoff", 0.0, "must be at least 1"));
        }
        let budget = TailBudget::default();
        let dropped = base.rank_tail(cutoff + 1, &budget);
        let mut head = base.head(cutoff);
        head.retain(|v| *v > 0.0);
        let kept = numeric::sum(head.iter().copied(), Precision::Extended);
        for v in &mut head {
            *v /= kept;
        }
        Ok(Self::wrap(Kind::TruncatedView {
            base: base.clone(),
            cutoff,
            dropped,
            values: FiniteSeq::from_sorted(head),
        }))
    }

    /// Explicit block followed by `source` from rank `head.len() + 1` on.
    pub fn spliced(head: Vec<f64>, source: &SchmidtSpectrum) -> Result<Self> {
        if let Some(bad) = head.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidCoefficients(format!(
                "spliced coefficient {bad} is negative or non-finite"
            )));
        }
        let mut head_sorted = head.clone();
        head_sorted.sort_by(|a, b| b.total_cmp(a));
        Ok(Self::wrap(Kind::Spliced(Splice {
            head,
            head_sorted,
            source: source.clone(),
        })))
    }

    /// `ν_1 = 1 - p(1 - μ_1)`, `ν_i = p μ_i`.
    pub fn concentrated(base: &SchmidtSpectrum, p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0 && p <= 1.0) {
            return Err(Error::param("p", p, "must lie in (0, 1]"));
        }
        if p == 1.0 {
            return Ok(base.clone());
        }
        Ok(Self::wrap(Kind::Concentrated {
            base: base.clone(),
            p,
        }))
    }

    /// Spectrum proportional to a positive decreasing weight `w(n)`, `n ≥ 1`,
    /// whose primitive `F(n) = ∫_n^∞ w` is known in closed form. Both are
    /// supplied as logarithms.
    pub fn derived(
        name: impl Into<String>,
        parameter: f64,
        ln_weight: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ln_primitive: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let mut seq = DerivedSeq {
            name: name.into(),
            parameter,
            ln_weight: Arc::new(ln_weight),
            ln_primitive: Arc::new(ln_primitive),
            norm: (1.0, 1.0),
        };
        let norm = seq.raw_tail(1, DERIVED_EXPLICIT, Precision::Extended);
        if !(norm.0 > 0.0 && norm.1.is_finite()) {
            return Err(Error::InvalidFamily(format!(
                "weight of {} is not summable",
                seq.name
            )));
        }
        seq.norm = norm;
        Ok(Self::wrap(Kind::Derived(seq)))
    }

    /// Smallest family index (2 for the log-corrected family, else 1).
    pub fn first_index(&self) -> usize {
        match self.kind() {
            Kind::LogPower { .. } => 2,
            _ => 1,
        }
    }

    fn rank_of(&self, n: usize) -> Result<usize> {
        let first = self.first_index();
        if n < first {
            return Err(Error::IndexOutOfRange { index: n, first });
        }
        Ok(n + 1 - first)
    }

    /// `λ_n` at family index `n`. Finite spectra return 0 past their length.
    pub fn coefficient(&self, n: usize) -> Result<f64> {
        Ok(self.rank_coefficient(self.rank_of(n)?))
    }

    /// Certified enclosure of `E_n` at family index `n`.
    pub fn tail(&self, n: usize, budget: &TailBudget) -> Result<TailInterval> {
        Ok(self.rank_tail(self.rank_of(n)?, budget))
    }

    /// Number of nonzero coefficients, `None` for infinite rank.
    pub fn support(&self) -> Option<usize> {
        match self.kind() {
            Kind::Finite(f) => Some(f.values.len()),
            Kind::TruncatedView { values, .. } => Some(values.values.len()),
            Kind::TensorProduct { left, right } => Some(left.support()? * right.support()?),
            Kind::TensorPower { base, copies } => base.support()?.checked_pow(*copies),
            Kind::Spliced(s) => s.source.support().map(|n| {
                let from = s.head.len();
                s.head.iter().filter(|v| **v > 0.0).count() + n.saturating_sub(from)
            }),
            Kind::Concentrated { base, .. } => base.support(),
            _ => None,
        }
    }

    pub fn is_finite_rank(&self) -> bool {
        self.support().is_some()
    }

    /// Finite coefficient list, for finite-rank spectra.
    pub fn finite_values(&self) -> Option<Vec<f64>> {
        let n = self.support()?;
        Some(self.head(n))
    }

    /// True when ranks are O(1) to evaluate.
    pub(crate) fn has_direct_access(&self) -> bool {
        !matches!(
            self.kind(),
            Kind::TensorProduct { .. } | Kind::TensorPower { .. } | Kind::Spliced(_)
        )
    }

    /// Leaf operands of a (possibly nested) tensor product.
    pub(crate) fn factors(&self) -> Vec<SchmidtSpectrum> {
        match self.kind() {
            Kind::TensorProduct { left, right } => {
                let mut out = left.factors();
                out.extend(right.factors());
                out
            }
            Kind::TensorPower { base, copies } => {
                let inner = base.factors();
                let mut out = Vec::with_capacity(inner.len() * *copies as usize);
                for _ in 0..*copies {
                    out.extend(inner.iter().cloned());
                }
                out
            }
            _ => vec![self.clone()],
        }
    }

    /// `ln λ` at rank `k` (1-based); `-∞` past the support.
    pub fn ln_rank_coefficient(&self, k: usize) -> f64 {
        assert!(k >= 1, "ranks are 1-based");
        match self.kind() {
            Kind::Geometric { q } => (1.0 - q * q).ln() + 2.0 * (k as f64 - 1.0) * q.ln(),
            Kind::PowerLaw { r, zeta } => {
                Series::Power { s: 1.0 / r }.ln_term(k as f64) - (0.5 * (zeta.0 + zeta.1)).ln()
            }
            Kind::LogPower { t, norm } => {
                Series::Log { t: *t }.ln_term(k as f64 + 1.0) - (0.5 * (norm.0 + norm.1)).ln()
            }
            Kind::Concentrated { base, p } if k >= 2 => p.ln() + base.ln_rank_coefficient(k),
            Kind::Derived(d) => (d.ln_weight)(k as f64) - (0.5 * (d.norm.0 + d.norm.1)).ln(),
            _ => {
                let v = self.rank_coefficient(k);
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `k`-th largest coefficient (1-based).
    pub fn rank_coefficient(&self, k: usize) -> f64 {
        assert!(k >= 1, "ranks are 1-based");
        match self.kind() {
            Kind::Finite(f) => f.values.get(k - 1).copied().unwrap_or(0.0),
            Kind::TruncatedView { values, .. } => values.values.get(k - 1).copied().unwrap_or(0.0),
            Kind::Concentrated { base, p } => {
                if k == 1 {
                    1.0 - p * (1.0 - base.rank_coefficient(1))
                } else {
                    p * base.rank_coefficient(k)
                }
            }
            Kind::TensorProduct { .. } | Kind::TensorPower { .. } | Kind::Spliced(_) => {
                self.head(k).get(k - 1).copied().unwrap_or(0.0)
            }
            Kind::Geometric { q } => (1.0 - q * q) * q.powf(2.0 * (k as f64 - 1.0)),
            _ => self.ln_rank_coefficient(k).exp(),
        }
    }

    /// The `k` largest coefficients in nonincreasing order, zero padded.
    pub fn head(&self, k: usize) -> Vec<f64> {
        match self.kind() {
            Kind::TensorProduct { .. } | Kind::TensorPower { .. } => {
                let mut out: Vec<f64> = ProductEnumerator::new(self.factors()).take(k).collect();
                out.resize(k, 0.0);
                out
            }
            Kind::Spliced(s) => {
                let from = s.head.len();
                let source: Vec<f64> = (from + 1..=from + k)
                    .map(|j| s.source.rank_coefficient(j))
                    .collect();
                merge_desc(&s.head_sorted, &source, k)
            }
            _ => (1..=k).map(|j| self.rank_coefficient(j)).collect(),
        }
    }

    /// Certified enclosure of `E_k` at rank `k`.
    pub fn rank_tail(&self, k: usize, budget: &TailBudget) -> TailInterval {
        assert!(k >= 1, "ranks are 1-based");
        match self.kind() {
            Kind::Geometric { q } => TailInterval::exact(q.powf(2.0 * (k as f64 - 1.0))),
            Kind::PowerLaw { .. } | Kind::LogPower { .. } | Kind::Derived(_) => {
                let (lo, hi) = self.ln_rank_tail(k, budget);
                budget.flag(TailInterval::new(lo.exp(), hi.exp()))
            }
            Kind::Finite(f) => TailInterval::exact(f.tail(k)),
            Kind::TruncatedView { values, .. } => TailInterval::exact(values.tail(k)),
            Kind::Concentrated { base, p } => {
                let b = base.rank_tail(k, budget);
                if k == 1 {
                    let (lo, hi) = numeric::widen(p * b.lower + (1.0 - p), p * b.upper + (1.0 - p));
                    TailInterval { lower: lo, upper: hi, converged: b.converged }
                } else {
                    b.scale(*p)
                }
            }
            _ => {
                let scan = self.scan(k, budget);
                scan.tails[k - 1]
            }
        }
    }

    /// Log-space enclosure of `E_k`, usable at ranks where `E_k` underflows.
    pub fn ln_rank_tail(&self, k: usize, budget: &TailBudget) -> (f64, f64) {
        match self.kind() {
            Kind::Geometric { q } => {
                let v = 2.0 * (k as f64 - 1.0) * q.ln();
                let pad = 16.0 * f64::EPSILON * (1.0 + v.abs());
                (v - pad, v + pad)
            }
            Kind::PowerLaw { r, zeta } => {
                let (lo, hi) = Series::Power { s: 1.0 / r }.ln_sum_from(
                    k as u64,
                    budget.explicit_terms,
                    budget.precision,
                );
                (lo - zeta.1.ln(), hi - zeta.0.ln())
            }
            Kind::LogPower { t, norm } => {
                let (lo, hi) = Series::Log { t: *t }.ln_sum_from(
                    k as u64 + 1,
                    budget.explicit_terms,
                    budget.precision,
                );
                (lo - norm.1.ln(), hi - norm.0.ln())
            }
            Kind::Derived(d) => {
                let cut = budget.explicit_terms.max(k as u64);
                let (lo, hi) = if k as u64 >= budget.explicit_terms {
                    let f = (d.ln_primitive)(k as f64);
                    let w = (d.ln_weight)(k as f64);
                    (f, numeric::log_add_exp(f, w))
                } else {
                    let (lo, hi) = d.raw_tail(k as u64, cut, budget.precision);
                    (lo.ln(), hi.ln())
                };
                (lo - d.norm.1.ln(), hi - d.norm.0.ln())
            }
            Kind::Concentrated { base, p } if k >= 2 => {
                let (lo, hi) = base.ln_rank_tail(k, budget);
                (lo + p.ln(), hi + p.ln())
            }
            Kind::Spliced(s) => match s.consumed_by(k) {
                Some(c) if c < k => {
                    let nonzero = s.head.iter().filter(|v| **v > 0.0).count();
                    s.source.ln_rank_tail(k + s.head.len() - nonzero, budget)
                }
                _ => ln_interval(self.rank_tail(k, budget)),
            },
            _ => ln_interval(self.rank_tail(k, budget)),
        }
    }

    /// True if this spectrum and `other` describe the same closed form.
    pub fn same_as(&self, other: &SchmidtSpectrum) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self == other
    }
}

impl TailBudget {
    fn flag(&self, mut t: TailInterval) -> TailInterval {
        if let Some(w) = self.target_width {
            t.converged = t.width() <= w;
        }
        t
    }
}

impl Splice {
    /// Rank after which every head element has been emitted, if it happens
    /// before `limit`; beyond it the spliced tails equal the source tails.
    pub(crate) fn consumed_by(&self, limit: usize) -> Option<usize> {
        let smallest = match self.head_sorted.iter().rev().find(|v| **v > 0.0) {
            Some(v) => *v,
            None => return Some(self.head.len()),
        };
        let from = self.head.len();
        // source ranks strictly larger than the smallest head element come
        // first in the merge
        let mut j = from + 1;
        while j <= from + limit {
            if self.source.rank_coefficient(j) < smallest {
                let emitted_source = j - from - 1;
                return Some(self.head_sorted.iter().filter(|v| **v > 0.0).count() + emitted_source);
            }
            j += 1;
        }
        None
    }
}

fn ln_interval(t: TailInterval) -> (f64, f64) {
    (t.lower.ln(), t.upper.ln())
}

fn merge_desc(a: &[f64], b: &[f64], k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    let (mut i, mut j) = (0, 0);
    while out.len() < k {
        let x = a.get(i).copied().unwrap_or(0.0);
        let y = b.get(j).copied().unwrap_or(0.0);
        if x >= y && i < a.len() {
            out.push(x);
            i += 1;
        } else if j < b.len() {
            out.push(y);
            j += 1;
        } else {
            out.push(0.0);
        }
    }
    out
}
