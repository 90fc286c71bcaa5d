pub mod cli;
pub mod error;
pub mod numeric;
mod certify;
pub mod locc;
pub mod majorization;
pub mod monotone;
pub mod slocc;
mod series;
pub mod spectrum;

pub use error::{Error, Result};
pub use numeric::Precision;
pub use spectrum::{DecayClass, SchmidtSpectrum, TailBudget, TailInterval};
