//! JSON spectrum specifications, e.g. `{"kind":"geometric","q":0.5}`.

use serde::{Deserialize, Serialize};

use super::{Kind, SchmidtSpectrum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumSpec {
    Geometric {
        q: f64,
    },
    PowerLaw {
        r: f64,
    },
    LogPower {
        t: f64,
    },
    Finite {
        values: Vec<f64>,
    },
    TensorProduct {
        left: Box<SpectrumSpec>,
        right: Box<SpectrumSpec>,
    },
    TensorPower {
        base: Box<SpectrumSpec>,
        copies: u32,
    },
    Truncated {
        base: Box<SpectrumSpec>,
        cutoff: usize,
    },
    Concentrated {
        base: Box<SpectrumSpec>,
        p: f64,
    },
}

impl SpectrumSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum specs always serialise")
    }

    pub fn build(&self) -> Result<SchmidtSpectrum> {
        match self {
            SpectrumSpec::Geometric { q } => SchmidtSpectrum::geometric(*q),
            SpectrumSpec::PowerLaw { r } => SchmidtSpectrum::power_law(*r),
            SpectrumSpec::LogPower { t } => SchmidtSpectrum::log_power(*t),
            SpectrumSpec::Finite { values } => SchmidtSpectrum::finite(values.clone()),
            SpectrumSpec::TensorProduct { left, right } => {
                Ok(SchmidtSpectrum::tensor(&left.build()?, &right.build()?))
            }
            SpectrumSpec::TensorPower { base, copies } => {
                SchmidtSpectrum::tensor_power(&base.build()?, *copies)
            }
            SpectrumSpec::Truncated { base, cutoff } => {
                SchmidtSpectrum::truncated(&base.build()?, *cutoff)
            }
            SpectrumSpec::Concentrated { base, p } => {
                SchmidtSpectrum::concentrated(&base.build()?, *p)
            }
        }
    }
}

impl SchmidtSpectrum {
    /// The specification this spectrum was built from; spliced and derived
    /// spectra of infinite rank have none.
    pub fn to_spec(&self) -> Option<SpectrumSpec> {
        Some(match self.kind() {
            Kind::Geometric { q } => SpectrumSpec::Geometric { q: *q },
            Kind::PowerLaw { r, .. } => SpectrumSpec::PowerLaw { r: *r },
            Kind::LogPower { t, .. } => SpectrumSpec::LogPower { t: *t },
            Kind::Finite(f) => SpectrumSpec::Finite {
                values: f.values().to_vec(),
            },
            Kind::TensorProduct { left, right } => SpectrumSpec::TensorProduct {
                left: Box::new(left.to_spec()?),
                right: Box::new(right.to_spec()?),
            },
            Kind::TensorPower { base, copies } => SpectrumSpec::TensorPower {
                base: Box::new(base.to_spec()?),
                copies: *copies,
            },
            Kind::TruncatedView { base, cutoff, .. } => SpectrumSpec::Truncated {
                base: Box::new(base.to_spec()?),
                cutoff: *cutoff,
            },
            Kind::Concentrated { base, p } => SpectrumSpec::Concentrated {
                base: Box::new(base.to_spec()?),
                p: *p,
            },
            Kind::Spliced(_) | Kind::Derived(_) => SpectrumSpec::Finite {
                values: self.finite_values()?,
            },
        })
    }
}
