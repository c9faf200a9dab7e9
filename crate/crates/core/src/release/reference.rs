use super::constraint::ConstraintMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_REFERENCE_CAP: usize = 2_000;

/// Least squares consistent projection by dense normal equations:
/// `v − M (MᵀM)⁻¹ Mᵀ v`, solved with Cholesky. Cubic cost; use it to check
/// [`super::ConsistentReleaser`].
pub fn dense_projection(constraint: &ConstraintMatrix, noisy: &[f64], cap: usize) -> Result<Vec<f64>> {
    let n = constraint.rows();
    if n > cap {
        return Err(Error::SizeCapExceeded { n, cap });
    }
    if noisy.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: noisy.len(),
        });
    }
    if constraint.cols() == 0 {
        return Ok(noisy.to_vec());
    }
    let m = constraint.to_dense();
    let rhs = m.transpose().matvec(noisy)?;
    let y = m.gram().cholesky_solve(&rhs)?;
    let correction = m.matvec(&y)?;
    Ok(noisy.iter().zip(correction).map(|(v, c)| v - c).collect())
}
