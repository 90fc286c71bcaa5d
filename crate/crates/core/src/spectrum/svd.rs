//! Schmidt coefficients of an explicit bipartite state.
//!
//! The Schmidt coefficients are the squared singular values of the
//! amplitude matrix, renormalised to sum to one.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SchmidtSpectrum;
use crate::error::{Error, Result};

/// Tolerance on the Frobenius norm before an input is rescaled.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Dense row-major matrix of amplitudes `ψ_{ij}`; rows index the first
/// subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl AmplitudeMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(AmplitudeMatrix { rows, cols, data })
    }

    /// From real rows.
    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_parts(rows, None)
    }

    /// From real and (optionally) imaginary parts of equal shape.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let r = re.len();
        let c = re.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some(im) = im {
            if im.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    actual: im.len(),
                });
            }
        }
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in re.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    actual: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                let y = match im {
                    Some(im) => *im[i].get(j).ok_or(Error::DimensionMismatch {
                        expected: c,
                        actual: im[i].len(),
                    })?,
                    None => 0.0,
                };
                data.push(Complex64::new(x, y));
            }
        }
        Self::new(r, c, data)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True if the state needs rescaling to unit norm.
    pub fn needs_rescale(&self) -> bool {
        (self.frobenius_norm() - 1.0).abs() > NORM_TOLERANCE
    }
}

/// Squared singular values of `m`, nonincreasing (not normalised).
pub fn squared_singular_values(m: &AmplitudeMatrix) -> Vec<f64> {
    let a = DMatrix::from_row_slice(m.rows, m.cols, &m.data);
    let mut out: Vec<f64> = a.singular_values().iter().map(|s| s * s).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

impl SchmidtSpectrum {
    /// Schmidt spectrum of the state with amplitude matrix `m`, rescaled to
    /// unit norm if needed (see [`AmplitudeMatrix::needs_rescale`]).
    pub fn from_amplitude_matrix(m: &AmplitudeMatrix) -> Result<Self> {
        let sv = squared_singular_values(m);
        let total: f64 = sv.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidCoefficients("amplitude matrix is zero".into()));
        }
        SchmidtSpectrum::finite(sv.iter().map(|v| v / total).collect::<Vec<_>>())
    }
}
