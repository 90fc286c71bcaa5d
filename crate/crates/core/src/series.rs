//! Certified remainders of the two slowly decaying closed-form series,
//! `Σ n^{-s}` and `Σ 1/(n (ln n)^t)`.
//!
//! Both summands are completely monotone on their domain, so the
//! Euler–Maclaurin expansion truncated after the `f'` term is bracketed by
//! the next (`f'''`) term. The result is intersected with the cruder
//! trapezoid / midpoint bounds, which only need convexity.

use crate::numeric::{log_add_exp, Precision, Summer};

/// Number of leading terms summed explicitly before switching to the
/// remainder bracket.
pub const EXPLICIT_TERMS: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Series {
    /// `f(x) = x^{-s}`, `s > 1`, from `n = 1`.
    Power { s: f64 },
    /// `f(x) = 1/(x (ln x)^t)`, `t > 1`, from `n = 2`.
    Log { t: f64 },
}

#[inline]
fn log_pad(x: f64) -> f64 {
    64.0 * f64::EPSILON * (1.0 + x.abs())
}

impl Series {
    pub fn first_index(&self) -> u64 {
        match self {
            Series::Power { .. } => 1,
            Series::Log { .. } => 2,
        }
    }

    pub fn ln_term(&self, x: f64) -> f64 {
        match *self {
            Series::Power { s } => -s * x.ln(),
            Series::Log { t } => -x.ln() - t * x.ln().ln(),
        }
    }

    pub fn term(&self, x: f64) -> f64 {
        self.ln_term(x).exp()
    }

    /// `ln ∫_x^∞ f`.
    pub fn ln_integral_from(&self, x: f64) -> f64 {
        match *self {
            Series::Power { s } => (1.0 - s) * x.ln() - (s - 1.0).ln(),
            Series::Log { t } => (1.0 - t) * x.ln().ln() - (t - 1.0).ln(),
        }
    }

    /// `f'(x)/f(x)` and `f'''(x)/f(x)`.
    fn derivative_ratios(&self, x: f64) -> (f64, f64) {
        match *self {
            Series::Power { s } => (-s / x, -s * (s + 1.0) * (s + 2.0) / (x * x * x)),
            Series::Log { t } => {
                let l = x.ln();
                let g1 = -t / l;
                let g2 = t * (t + 1.0) / (l * l);
                let g3 = -t * (t + 1.0) * (t + 2.0) / (l * l * l);
                let d1 = (-1.0 + g1) / x;
                let d3 = (-6.0 + 11.0 * g1 - 6.0 * g2 + g3) / (x * x * x);
                (d1, d3)
            }
        }
    }

    /// Log-space enclosure of `Σ_{i ≥ n} f(i)`.
    pub fn ln_remainder(&self, n: f64) -> (f64, f64) {
        let ln_f = self.ln_term(n);
        let ln_i = self.ln_integral_from(n);
        let (d1, d3) = self.derivative_ratios(n);

        // trapezoid rule on a convex summand over-estimates each cell
        let crude_lo = log_add_exp(ln_i, ln_f + 0.5f64.ln());
        // midpoint rule under-estimates
        let crude_hi = self.ln_integral_from(n - 0.5);

        let c_hi = 0.5 - d1 / 12.0;
        let c_lo = c_hi + d3 / 720.0;
        let em_hi = log_add_exp(ln_i, ln_f + c_hi.ln());
        let em_lo = if c_lo > 0.0 {
            log_add_exp(ln_i, ln_f + c_lo.ln())
        } else {
            crude_lo
        };
        let lo = em_lo.max(crude_lo);
        let hi = em_hi.min(crude_hi).max(lo);
        (lo - log_pad(lo), hi + log_pad(hi))
    }

    /// Enclosure of `Σ_{i ≥ n} f(i)`, summing terms below `explicit_to`
    /// directly.
    pub fn sum_from(&self, n: u64, explicit_to: u64, precision: Precision) -> (f64, f64) {
        let start = n.max(self.first_index());
        let cut = explicit_to.max(start);
        let mut acc = Summer::new(precision);
        for i in start..cut {
            acc.add(self.term(i as f64));
        }
        let (rlo, rhi) = self.ln_remainder(cut as f64);
        let head = acc.value();
        // each term carries the rounding of `exp(ln f)`, relative error
        // about |ln f| ulps; compensated accumulation adds a few more
        let pad = head * f64::EPSILON * (4.0 + 2.0 * self.ln_term(cut as f64).abs());
        ((head - pad + rlo.exp()).max(0.0), head + pad + rhi.exp())
    }

    /// Log-space enclosure of `Σ_{i ≥ n} f(i)` for arbitrarily large `n`.
    pub fn ln_sum_from(&self, n: u64, explicit_to: u64, precision: Precision) -> (f64, f64) {
        if n >= explicit_to {
            self.ln_remainder(n as f64)
        } else {
            let (lo, hi) = self.sum_from(n, explicit_to, precision);
            (lo.ln(), hi.ln())
        }
    }

    /// Enclosure of the full sum (the normalisation constant).
    pub fn total(&self) -> (f64, f64) {
        self.sum_from(self.first_index(), EXPLICIT_TERMS, Precision::Extended)
    }
}
