//! Polynomial moments `Σ n^d λ_n`: the mean of a Hamiltonian that is
//! polynomial in the Schmidt index.

use serde::Serialize;

use super::{Kind, SchmidtSpectrum};
use crate::error::{Error, Result};
use crate::numeric::{widen, Precision, Summer};
use crate::series::Series;

/// Why a moment diverges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCertificate {
    /// The test applied (comparison, integral, term test).
    pub test: String,
    /// Exponent `e` such that the summand is comparable to `n^e` (or worse).
    pub summand_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MomentResult {
    Finite { value: f64, lower: f64, upper: f64 },
    Divergent(MomentCertificate),
    /// No certificate either way (composites of infinite rank).
    Undetermined { reason: String },
}

impl MomentResult {
    fn finite(lower: f64, upper: f64) -> Self {
        let (lower, upper) = widen(lower, upper);
        MomentResult::Finite {
            value: 0.5 * (lower + upper),
            lower,
            upper,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            MomentResult::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }
}

impl SchmidtSpectrum {
    /// `Σ_n n^d λ_n` for family index `n`, with a convergence certificate.
    pub fn mean_moment(&self, d: u32) -> Result<MomentResult> {
        if d == 0 {
            return Err(Error::param("d", 0.0, "degree must be at least 1"));
        }
        let first = self.first_index();
        if let Some(values) = self.finite_values() {
            let mut acc = Summer::new(Precision::Extended);
            for (i, v) in values.iter().enumerate() {
                acc.add(((i + first) as f64).powi(d as i32) * v);
            }
            let s = acc.value();
            return Ok(MomentResult::finite(s, s));
        }
        Ok(match self.kind() {
            Kind::Geometric { q } => geometric_moment(*q, d),
            Kind::PowerLaw { r, zeta } => {
                let s = 1.0 / r;
                let e = d as f64 - s;
                if e < -1.0 {
                    let (lo, hi) = Series::Power { s: s - d as f64 }.total();
                    MomentResult::finite(lo / zeta.1, hi / zeta.0)
                } else {
                    MomentResult::Divergent(MomentCertificate {
                        test: format!("integral test: ∫ x^{e} dx diverges since {e} ≥ -1"),
                        summand_exponent: e,
                    })
                }
            }
            Kind::LogPower { t, .. } => MomentResult::Divergent(MomentCertificate {
                test: format!(
                    "term test: n^{d} / (n (ln n)^{t}) does not tend to zero for d ≥ 1"
                ),
                summand_exponent: d as f64 - 1.0,
            }),
            Kind::Concentrated { base, p } => match base.mean_moment(d)? {
                MomentResult::Finite { lower, upper, .. } => {
                    let mu1 = base.rank_coefficient(1);
                    let nu1 = 1.0 - p * (1.0 - mu1);
                    MomentResult::finite(nu1 + p * (lower - mu1), nu1 + p * (upper - mu1))
                }
                other => other,
            },
            _ => MomentResult::Undetermined {
                reason: "no comparison certificate for this composite".into(),
            },
        })
    }
}

/// Explicit summation with a geometric bound on the remainder: for
/// `n ≥ N` the term ratio is at most `ρ = ((N+1)/N)^d q²`.
fn geometric_moment(q: f64, d: u32) -> MomentResult {
    let q2 = q * q;
    let c = 1.0 - q2;
    let term = |n: f64| c * n.powi(d as i32) * q2.powf(n - 1.0);
    let mut acc = Summer::new(Precision::Extended);
    let mut n = 1.0f64;
    loop {
        let t = term(n);
        acc.add(t);
        let rho = ((n + 1.0) / n).powi(d as i32) * q2;
        if rho < 1.0 {
            let rem = t * rho / (1.0 - rho);
            if rem <= 1e-18 * acc.value() || t == 0.0 {
                let s = acc.value();
                return MomentResult::finite(s, s + rem);
            }
        }
        n += 1.0;
    }
}
