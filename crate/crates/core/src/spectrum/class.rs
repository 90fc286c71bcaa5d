//! Asymptotic decay classes of the tail `E_n`.

use serde::{Deserialize, Serialize};

use super::{Kind, SchmidtSpectrum};

/// Coarse asymptotic shape of `E_n` as `n → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum DecayClass {
    /// `E_n = 0` beyond the given rank.
    FiniteRank { rank: usize },
    /// `E_n = Θ(e^{rate·n})`, `rate < 0`.
    Exponential { rate: f64 },
    /// `ln E_n = -Θ(n^{1/order})`: a tensor product of `order`
    /// exponentially decaying factors.
    StretchedExponential { order: u32 },
    /// `E_n = Θ(n^{-exponent})`.
    Polynomial { exponent: f64 },
    /// `E_n = Θ((ln n)^{1-t})`.
    LogCorrected { t: f64 },
    Unknown,
}

impl DecayClass {
    /// Class of a tensor product.
    pub fn product(self, other: DecayClass) -> DecayClass {
        use DecayClass::*;
        match (self, other) {
            (FiniteRank { rank: a }, FiniteRank { rank: b }) => FiniteRank { rank: a * b },
            (FiniteRank { rank }, Exponential { rate }) | (Exponential { rate }, FiniteRank { rank }) => {
                Exponential {
                    rate: rate / rank as f64,
                }
            }
            (FiniteRank { .. }, c) | (c, FiniteRank { .. }) => c,
            (Exponential { .. }, Exponential { .. }) => StretchedExponential { order: 2 },
            (StretchedExponential { order }, Exponential { .. })
            | (Exponential { .. }, StretchedExponential { order }) => {
                StretchedExponential { order: order + 1 }
            }
            (StretchedExponential { order: a }, StretchedExponential { order: b }) => {
                StretchedExponential { order: a + b }
            }
            // #{(i, j) : a_i b_j ≥ t} = Σ_i N_b(t / a_i), a convergent multiple
            // of N_b(t) when the a_i decay faster than b's counting exponent
            (Exponential { .. } | StretchedExponential { .. }, c @ (Polynomial { .. } | LogCorrected { .. }))
            | (c @ (Polynomial { .. } | LogCorrected { .. }), Exponential { .. } | StretchedExponential { .. }) => c,
            (Polynomial { exponent: a }, Polynomial { exponent: b }) if a != b => Polynomial { exponent: a.min(b) },
            _ => Unknown,
        }
    }

    /// True when `E_n(self) / E_n(other) → 0` is guaranteed.
    pub fn faster_than(self, other: DecayClass) -> bool {
        use DecayClass::*;
        match (self, other) {
            (FiniteRank { .. }, FiniteRank { .. }) => false,
            (FiniteRank { .. }, Unknown) => false,
            (FiniteRank { .. }, _) => true,
            (Exponential { rate: a }, Exponential { rate: b }) => a < b,
            (Exponential { .. }, StretchedExponential { .. } | Polynomial { .. } | LogCorrected { .. }) => true,
            (StretchedExponential { order: a }, StretchedExponential { order: b }) => a < b,
            (StretchedExponential { .. }, Polynomial { .. } | LogCorrected { .. }) => true,
            (Polynomial { exponent: a }, Polynomial { exponent: b }) => a > b,
            (Polynomial { .. }, LogCorrected { .. }) => true,
            (LogCorrected { t: a }, LogCorrected { t: b }) => a > b,
            _ => false,
        }
    }

    pub fn is_finite_rank(self) -> bool {
        matches!(self, DecayClass::FiniteRank { .. })
    }
}

impl SchmidtSpectrum {
    pub fn decay_class(&self) -> DecayClass {
        match self.kind() {
            Kind::Finite(f) => DecayClass::FiniteRank {
                rank: f.values().len(),
            },
            Kind::TruncatedView { values, .. } => DecayClass::FiniteRank {
                rank: values.values().len(),
            },
            Kind::Geometric { q } => DecayClass::Exponential {
                rate: 2.0 * q.ln(),
            },
            Kind::PowerLaw { r, .. } => DecayClass::Polynomial {
                exponent: 1.0 / r - 1.0,
            },
            Kind::LogPower { t, .. } => DecayClass::LogCorrected { t: *t },
            Kind::TensorProduct { left, right } => left.decay_class().product(right.decay_class()),
            Kind::TensorPower { base, copies } => {
                let b = base.decay_class();
                (1..*copies).fold(b, |acc, _| acc.product(b))
            }
            Kind::Spliced(_) | Kind::Concentrated { .. } => match self.support() {
                Some(rank) => DecayClass::FiniteRank { rank },
                None => match self.kind() {
                    Kind::Spliced(s) => s.source().decay_class(),
                    Kind::Concentrated { base, .. } => base.decay_class(),
                    _ => unreachable!(),
                },
            },
            Kind::Derived(_) => DecayClass::Unknown,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_hierarchy() {
        let g = SchmidtSpectrum::geometric(0.9).unwrap().decay_class();
        let p = SchmidtSpectrum::power_law(0.9).unwrap().decay_class();
        let l = SchmidtSpectrum::log_power(2.0).unwrap().decay_class();
        assert!(g.faster_than(p) && p.faster_than(l) && g.faster_than(l));
        assert!(!p.faster_than(g) && !l.faster_than(p));
        assert!(!g.faster_than(g));
    }

    #[test]
    fn tensor_powers_stay_below_polynomial() {
        let g = SchmidtSpectrum::geometric(0.9).unwrap();
        let p = SchmidtSpectrum::power_law(0.3).unwrap().decay_class();
        for copies in 1..=4 {
            let c = SchmidtSpectrum::tensor_power(&g, copies).unwrap().decay_class();
            assert!(c.faster_than(p), "{copies} {c:?}");
        }
    }

    #[test]
    fn finite_factor_slows_exponential() {
        let g = SchmidtSpectrum::geometric(0.5).unwrap();
        let u = SchmidtSpectrum::finite(vec![0.5, 0.5]).unwrap();
        let c = SchmidtSpectrum::tensor(&u, &g).decay_class();
        assert_eq!(c, DecayClass::Exponential { rate: 0.5f64.ln() });
    }
}
