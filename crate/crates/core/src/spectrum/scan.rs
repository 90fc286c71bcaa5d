//! One-pass evaluation of the leading coefficients together with certified
//! enclosures of every tail up to a depth.

use super::{Kind, ProductEnumerator, SchmidtSpectrum, TailBudget, TailInterval};
use crate::numeric::{self, Summer};

/// The first `K` coefficients and the enclosures `E_1, ..., E_{K+1}`.
#[derive(Debug, Clone)]
pub struct Scan {
    pub coefficients: Vec<f64>,
    /// `tails[i]` encloses `E_{i+1}`; the vector has `K + 1` entries.
    pub tails: Vec<TailInterval>,
}

impl Scan {
    pub fn depth(&self) -> usize {
        self.coefficients.len()
    }

    /// `λ_k`, 1-based.
    pub fn coefficient(&self, k: usize) -> f64 {
        self.coefficients[k - 1]
    }

    /// Enclosure of `E_k`, `1 ≤ k ≤ K + 1`.
    pub fn tail(&self, k: usize) -> TailInterval {
        self.tails[k - 1]
    }

    /// True if every tail met the budget's width target.
    pub fn converged(&self) -> bool {
        self.tails.iter().all(|t| t.converged)
    }
}

/// Fill `E_K, ..., E_1` from `E_{K+1}` using `E_k = λ_k + E_{k+1}`.
fn accumulate(coefficients: Vec<f64>, last: TailInterval) -> Scan {
    let k = coefficients.len();
    let mut tails = vec![last; k + 1];
    let mut lo = Summer::new(crate::numeric::Precision::Extended);
    let mut hi = Summer::new(crate::numeric::Precision::Extended);
    lo.add(last.lower);
    hi.add(last.upper);
    for i in (0..k).rev() {
        lo.add(coefficients[i]);
        hi.add(coefficients[i]);
        let (l, h) = numeric::widen(lo.value(), hi.value());
        tails[i] = TailInterval {
            lower: l,
            upper: h,
            converged: last.converged,
        };
    }
    Scan {
        coefficients,
        tails,
    }
}

impl SchmidtSpectrum {
    /// Leading `depth` coefficients with certified tails `E_1 ..= E_{depth+1}`.
    pub fn scan(&self, depth: usize, budget: &TailBudget) -> Scan {
        match self.kind() {
            Kind::Finite(f) => exact_scan(f.values(), depth),
            Kind::TruncatedView { values, .. } => exact_scan(values.values(), depth),
            Kind::Geometric { .. } => {
                let coefficients = self.head(depth);
                let tails = (1..=depth + 1).map(|k| self.rank_tail(k, budget)).collect();
                Scan {
                    coefficients,
                    tails,
                }
            }
            Kind::PowerLaw { .. } | Kind::LogPower { .. } | Kind::Derived(_) => {
                let coefficients = self.head(depth);
                let last = self.rank_tail(depth + 1, budget);
                accumulate(coefficients, last)
            }
            Kind::Concentrated { base, p } => {
                let inner = base.scan(depth.max(1), budget);
                let mut coefficients: Vec<f64> =
                    inner.coefficients.iter().map(|v| p * v).collect();
                coefficients[0] = 1.0 - p * (1.0 - inner.coefficients[0]);
                coefficients.truncate(depth);
                let mut tails: Vec<TailInterval> =
                    inner.tails.iter().map(|t| t.scale(*p)).collect();
                tails[0] = TailInterval::exact(1.0);
                tails.truncate(depth + 1);
                Scan {
                    coefficients,
                    tails,
                }
            }
            Kind::Spliced(s) => {
                let coefficients = self.head(depth);
                // how many head entries made it into the top `depth`
                let mut remaining = s.head_sorted.clone();
                let mut from_source = 0usize;
                for &c in &coefficients {
                    if c == 0.0 {
                        break;
                    }
                    if let Some(pos) = remaining.iter().position(|v| *v == c) {
                        // prefer attributing equal values to the head; the
                        // multiset, and hence every tail, is unaffected
                        remaining.remove(pos);
                    } else {
                        from_source += 1;
                    }
                }
                let leftover = numeric::sum(remaining.iter().copied(), budget.precision);
                let src = s
                    .source
                    .rank_tail(s.head.len() + 1 + from_source, budget);
                let (lo, hi) = numeric::widen(leftover + src.lower, leftover + src.upper);
                let last = TailInterval {
                    lower: lo,
                    upper: hi,
                    converged: src.converged,
                };
                accumulate(coefficients, last)
            }
            Kind::TensorProduct { .. } | Kind::TensorPower { .. } => self.product_scan(depth, budget),
        }
    }

    fn product_scan(&self, depth: usize, budget: &TailBudget) -> Scan {
        let factors = self.factors();
        let mut walk = ProductEnumerator::new(factors.clone());
        let mut coefficients = Vec::with_capacity(depth);
        let mut prefix = Summer::new(budget.precision);
        while coefficients.len() < depth {
            match walk.next() {
                Some(v) => {
                    prefix.add(v);
                    coefficients.push(v);
                }
                None => coefficients.push(0.0),
            }
        }

        // Pop further nodes so the frontier estimate starts deeper.
        let mut extra = Summer::new(budget.precision);
        let mut popped = 0usize;
        while popped < budget.enumeration {
            match walk.next() {
                Some(v) => {
                    extra.add(v);
                    popped += 1;
                }
                None => break,
            }
        }

        // frontier: lower bound = its own values, upper bound = orthant tails
        let nodes: Vec<_> = walk.frontier().cloned().collect();
        let mut max_index = vec![1usize; factors.len()];
        for n in &nodes {
            for (m, &i) in max_index.iter_mut().zip(&n.index) {
                *m = (*m).max(i as usize);
            }
        }
        let operand_tails: Vec<Vec<f64>> = factors
            .iter()
            .zip(&max_index)
            .map(|(f, &m)| f.scan(m, budget).tails.iter().map(|t| t.upper).collect())
            .collect();
        let mut front_lo = Summer::new(budget.precision);
        let mut front_hi = Summer::new(budget.precision);
        for n in &nodes {
            front_lo.add(n.ln_value.exp());
            let ln_hi: f64 = n
                .index
                .iter()
                .zip(&operand_tails)
                .map(|(&i, t)| t[i as usize - 1].ln())
                .sum();
            front_hi.add(ln_hi.exp());
        }
        let e = extra.value();
        let (mut lo, mut hi) = numeric::widen(e + front_lo.value(), e + front_hi.value());

        // complement bound from the total mass Π E_1(factor)
        let (mut t_lo, mut t_hi) = (1.0f64, 1.0f64);
        for f in &factors {
            let t = f.rank_tail(1, budget);
            t_lo *= t.lower;
            t_hi *= t.upper;
        }
        let p = prefix.value();
        let slack = (depth as f64 + 4.0) * 4.0 * f64::EPSILON;
        lo = lo.max(t_lo - p - slack);
        hi = hi.min(t_hi - p + slack).max(lo);

        let mut last = TailInterval::new(lo, hi);
        if let Some(w) = budget.target_width {
            last.converged = last.width() <= w;
        }
        accumulate(coefficients, last)
    }
}

fn exact_scan(values: &[f64], depth: usize) -> Scan {
    let mut coefficients: Vec<f64> = values.iter().copied().take(depth).collect();
    coefficients.resize(depth, 0.0);
    let suffix = numeric::suffix_sums(values, crate::numeric::Precision::Extended);
    let tails = (0..=depth)
        .map(|i| TailInterval::exact(suffix.get(i).copied().unwrap_or(0.0)))
        .collect();
    Scan {
        coefficients,
        tails,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_tails_enclose_brute_force() {
        let g = SchmidtSpectrum::geometric(0.6).unwrap();
        let p = SchmidtSpectrum::power_law(0.3).unwrap();
        let t = SchmidtSpectrum::tensor(&g, &p);
        let budget = TailBudget::default();
        let scan = t.scan(30, &budget);

        // oracle: all pairwise products over a large window, sorted
        let mut all = Vec::new();
        for i in 1..=120 {
            for j in 1..=3000 {
                all.push(g.rank_coefficient(i) * p.rank_coefficient(j));
            }
        }
        all.sort_by(|a, b| b.total_cmp(a));
        for k in 0..30 {
            assert!((scan.coefficients[k] - all[k]).abs() <= 1e-15 * all[k].max(1e-300));
        }
        let prefix: f64 = all[..30].iter().sum();
        let e31 = 1.0 - prefix;
        let tail = scan.tail(31);
        assert!(tail.lower <= e31 + 1e-12 && e31 - 1e-12 <= tail.upper, "{tail:?} {e31}");
        assert!(tail.width() < 1e-6, "{tail:?}");
    }

    #[test]
    fn power_law_scan_is_monotone_and_consistent() {
        let s = SchmidtSpectrum::power_law(0.5).unwrap();
        let scan = s.scan(100, &TailBudget::default());
        for w in scan.tails.windows(2) {
            assert!(w[0].lower >= w[1].lower && w[0].upper >= w[1].upper);
        }
        let direct = s.rank_tail(50, &TailBudget::default());
        let t = scan.tail(50);
        assert!(t.lower <= direct.upper && direct.lower <= t.upper);
    }

    #[test]
    fn spliced_tail_counts_unemitted_head() {
        let g = SchmidtSpectrum::geometric(0.5).unwrap();
        let e3 = g.rank_tail(3, &TailBudget::default()).mid();
        let s = SchmidtSpectrum::spliced(vec![0.3, 0.7 - e3], &g).unwrap();
        let scan = s.scan(3, &TailBudget::default());
        let total: f64 = scan.coefficients.iter().sum::<f64>() + scan.tail(4).mid();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
