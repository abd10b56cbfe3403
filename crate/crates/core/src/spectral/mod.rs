//! SVD, Moore-Penrose pseudoinverse, numerical rank and eigenvalues.
//!
//! Rank decisions use a relative cutoff: singular values `<= tol * s[0]` are
//! treated as zero. `None` selects the default `eps * max(m, n)`.

mod eigen;
mod svd;

pub use eigen::{eigenvalues, Complex, EigenSet, MAX_EIGEN_DIM};
pub(crate) use svd::thin_svd;
pub use svd::{singular_values, svd, Svd};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub fn default_tolerance(a: &Matrix) -> f64 {
    a.rows().max(a.cols()) as f64 * f64::EPSILON
}

fn resolve_tol(a: &Matrix, tol: Option<f64>) -> Result<f64> {
    match tol {
        None => Ok(default_tolerance(a)),
        Some(t) if t >= 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(Error::InvalidArgument(format!(
            "tolerance must be finite and >= 0, got {t}"
        ))),
    }
}

/// Moore-Penrose pseudoinverse `V * S^+ * U^T`.
pub fn pinv(a: &Matrix, tol: Option<f64>) -> Result<Matrix> {
    let tol = resolve_tol(a, tol)?;
    let t = thin_svd(a)?;
    let (m, n) = a.shape();
    let cutoff = tol * t.s.first().copied().unwrap_or(0.0);
    let kept: Vec<usize> = (0..t.s.len()).filter(|&k| t.s[k] > cutoff).collect();
    Ok(Matrix::from_fn(n, m, |i, j| {
        kept.iter().map(|&k| t.v[k][i] * t.u[k][j] / t.s[k]).sum()
    }))
}

/// Number of singular values above `tol * s[0]`.
pub fn rank(a: &Matrix, tol: Option<f64>) -> Result<usize> {
    let tol = resolve_tol(a, tol)?;
    let s = singular_values(a)?;
    let cutoff = tol * s[0];
    Ok(s.iter().filter(|&&x| x > cutoff).count())
}
