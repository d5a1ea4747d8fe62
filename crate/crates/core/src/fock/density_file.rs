//! Text format for user-supplied density matrices.
//!
//! ```json
//! { "n_max": 1, "rho": [[1, 0], [0, 0], ...] }
//! ```
//!
//! `rho` holds `(n_max + 1)^4` complex entries as `[re, im]` pairs, row-major
//! over the canonical basis `index(n1, n2) = n1 * (n_max + 1) + n2`.

use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Cutoff, TruncatedOperator};
use crate::error::{Error, Result, ValidationError};

pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-8;
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    n_max: usize,
    rho: Vec<[f64; 2]>,
}

/// Parses and validates a density-matrix document.
pub fn parse_density_matrix(text: &str) -> Result<TruncatedOperator> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let cutoff = Cutoff::with_n_max(doc.n_max).map_err(|e| Error::Parse(e.to_string()))?;
    let dim = cutoff.dim();
    if doc.rho.len() != dim * dim {
        return Err(ValidationError::Length {
            n_max: doc.n_max,
            expected: dim * dim,
            found: doc.rho.len(),
        }
        .into());
    }
    let entries = DMatrix::from_fn(dim, dim, |i, j| {
        let [re, im] = doc.rho[i * dim + j];
        Complex64::new(re, im)
    });
    let rho = TruncatedOperator { cutoff, entries };
    validate_density(&rho)?;
    Ok(rho)
}

pub fn read_density_matrix(path: impl AsRef<Path>) -> Result<TruncatedOperator> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_density_matrix(&text)
}

/// Serializes `rho` in the same format `parse_density_matrix` reads.
pub fn write_density_matrix(rho: &TruncatedOperator) -> String {
    let dim = rho.dim();
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let z = rho.entries[(i, j)];
            entries.push([z.re, z.im]);
        }
    }
    serde_json::to_string(&Document { n_max: rho.cutoff.n_max, rho: entries })
        .expect("plain numbers always serialize")
}

/// Checks Hermiticity, unit trace and positivity, reporting the worst offender.
pub fn validate_density(rho: &TruncatedOperator) -> std::result::Result<(), ValidationError> {
    let m = &rho.entries;
    let dim = m.nrows();
    let mut worst = (0, 0, 0.0f64);
    for i in 0..dim {
        for j in 0..dim {
            let z = m[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(ValidationError::NonFinite { row: i, col: j });
            }
            let dev = (z - m[(j, i)].conj()).norm();
            if dev > worst.2 {
                worst = (i, j, dev);
            }
        }
    }
    if worst.2 > HERMITICITY_TOLERANCE {
        return Err(ValidationError::Hermiticity { row: worst.0, col: worst.1, deviation: worst.2 });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > TRACE_TOLERANCE {
        return Err(ValidationError::Trace { trace, deficit: 1.0 - trace });
    }
    let hermitian = (m + m.adjoint()) * Complex64::from(0.5);
    let eig = SymmetricEigen::new(hermitian);
    let (index, eigenvalue) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, l)| if l < acc.1 { (i, l) } else { acc });
    if eigenvalue < -POSITIVITY_TOLERANCE {
        return Err(ValidationError::Positivity { index, eigenvalue });
    }
    Ok(())
}
