//! Summation and log-space helpers shared by every module.
//!
//! Tails of slowly decaying spectra are sums of many tiny positive terms,
//! so every accumulation goes through a compensated [`Summer`]. The
//! `Extended` precision mode keeps a full double-double accumulator.

use serde::{Deserialize, Serialize};

/// Working precision for accumulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    /// 64-bit floats with Neumaier compensation.
    #[default]
    Double,
    /// Double-double accumulation (about 106 bits of significand).
    Extended,
}

/// Compensated accumulator.
#[derive(Debug, Clone, Copy)]
pub struct Summer {
    hi: f64,
    lo: f64,
    precision: Precision,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Summer {
    pub fn new(precision: Precision) -> Self {
        Summer {
            hi: 0.0,
            lo: 0.0,
            precision,
        }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        match self.precision {
            Precision::Double => {
                let t = self.hi + v;
                if self.hi.abs() >= v.abs() {
                    self.lo += (self.hi - t) + v;
                } else {
                    self.lo += (v - t) + self.hi;
                }
                self.hi = t;
            }
            Precision::Extended => {
                let (s, e) = two_sum(self.hi, v);
                let (hi, lo) = quick_two_sum(s, e + self.lo);
                self.hi = hi;
                self.lo = lo;
            }
        }
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Compensated sum of an iterator.
pub fn sum<I: IntoIterator<Item = f64>>(values: I, precision: Precision) -> f64 {
    let mut s = Summer::new(precision);
    for v in values {
        s.add(v);
    }
    s.value()
}

/// Running prefix sums `P_k = v_1 + ... + v_k`, `P_0 = 0`.
pub fn prefix_sums(values: &[f64], precision: Precision) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len() + 1);
    let mut s = Summer::new(precision);
    out.push(0.0);
    for &v in values {
        s.add(v);
        out.push(s.value());
    }
    out
}

/// Suffix sums `T_k = v_k + ... + v_last`, with a trailing zero.
pub fn suffix_sums(values: &[f64], precision: Precision) -> Vec<f64> {
    let mut out = vec![0.0; values.len() + 1];
    let mut s = Summer::new(precision);
    for (i, &v) in values.iter().enumerate().rev() {
        s.add(v);
        out[i] = s.value();
    }
    out
}

/// `ln(e^a + e^b)` without overflow.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Relative slack applied when turning a rounded value into an enclosure.
pub const ROUNDING_SLACK: f64 = 8.0 * f64::EPSILON;

/// Widen `[lo, hi]` outward by a few ulps of relative slack.
#[inline]
pub fn widen(lo: f64, hi: f64) -> (f64, f64) {
    let lo = if lo > 0.0 {
        lo * (1.0 - ROUNDING_SLACK)
    } else {
        lo - ROUNDING_SLACK * lo.abs()
    };
    let hi = hi * (1.0 + ROUNDING_SLACK);
    (lo.max(0.0), hi)
}

/// `ln C(n, k)` for integer arguments, exact summation of logs (k small).
pub fn ln_binomial(n: f64, k: u32) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if n < k as f64 {
        return f64::NEG_INFINITY;
    }
    let mut acc = 0.0;
    for j in 0..k {
        acc += (n - j as f64).ln() - ((j + 1) as f64).ln();
    }
    acc
}

/// `ln k!` for small k.
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}
