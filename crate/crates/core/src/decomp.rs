//! Unit-invariant decompositions and signatures.

use crate::error::{Error, Result};
use crate::inverse::uinv;
use crate::matrix::{hadamard, DiagonalFactor, Matrix};
use crate::scaling::{dscale, left_scale, ScalingOptions};
use crate::spectral::{eigenvalues, singular_values, svd, EigenSet};

/// `a = diag(d) * u * diag(s) * v^T * diag(e)`.
#[derive(Debug, Clone)]
pub struct UiSvd {
    pub d: DiagonalFactor,
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
    pub e: DiagonalFactor,
}

impl UiSvd {
    pub fn reconstruct(&self) -> Result<Matrix> {
        let (m, n) = (self.u.rows(), self.v.rows());
        let core = Matrix::from_fn(m, n, |i, j| {
            self.s
                .iter()
                .enumerate()
                .map(|(k, s)| self.u[(i, k)] * s * self.v[(j, k)])
                .sum()
        });
        core.scale_rows(self.d.entries())?
            .scale_cols(self.e.entries())
    }

    /// `diag(e)^-1 * v * diag(s)^+ * u^T * diag(d)^-1` with singular values
    /// at or below `tol * s[0]` treated as zero.
    pub fn generalized_inverse(&self, tol: Option<f64>) -> Result<Matrix> {
        let (m, n) = (self.u.rows(), self.v.rows());
        let tol = tol.unwrap_or(m.max(n) as f64 * f64::EPSILON);
        let cutoff = tol * self.s.first().copied().unwrap_or(0.0);
        let kept: Vec<usize> = (0..self.s.len()).filter(|&k| self.s[k] > cutoff).collect();
        let core = Matrix::from_fn(n, m, |i, j| {
            kept.iter()
                .map(|&k| self.v[(i, k)] * self.u[(j, k)] / self.s[k])
                .sum()
        });
        core.scale_rows(self.e.inverse().entries())?
            .scale_cols(self.d.inverse().entries())
    }
}

/// Unit-invariant SVD: the SVD of the jointly scaled matrix, with the
/// inverse scale factors as outer diagonals.
pub fn ui_svd(a: &Matrix) -> Result<UiSvd> {
    let scaling = dscale(a, ScalingOptions::default())?.require_converged()?;
    let inner = svd(&scaling.scaled)?;
    Ok(UiSvd {
        d: scaling.left.inverse(),
        u: inner.u,
        s: inner.s,
        v: inner.v,
        e: scaling.right.inverse(),
    })
}

/// Singular values of the jointly scaled matrix; unchanged by `a -> D a E`
/// for nonsingular diagonal `D`, `E`.
pub fn ui_singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let scaling = dscale(a, ScalingOptions::default())?.require_converged()?;
    singular_values(&scaling.scaled)
}

/// Left unit-invariant SVD `a = diag(d) * u * diag(s) * v^T` with `d` the
/// inverse of the row normalization. `s` is unchanged by `a -> D a V` for
/// nonsingular diagonal `D` and orthogonal `V`.
#[derive(Debug, Clone)]
pub struct LeftUiSvd {
    pub d: DiagonalFactor,
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

pub fn left_ui_svd(a: &Matrix) -> Result<LeftUiSvd> {
    let l = left_scale(a);
    let inner = svd(&a.scale_rows(l.entries())?)?;
    Ok(LeftUiSvd {
        d: l.inverse(),
        u: inner.u,
        s: inner.s,
        v: inner.v,
    })
}

/// Eigenvalues of the jointly scaled matrix. Invariant under `a -> D a E`
/// when `D E` is a nonnegative diagonal (for example `D a D^-1` with
/// positive `D`).
pub fn si_eigenvalues(a: &Matrix) -> Result<EigenSet> {
    let scaling = dscale(a, ScalingOptions::default())?.require_converged()?;
    eigenvalues(&scaling.scaled)
}

/// Unit-norm, nonincreasing vector of leading singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    values: Vec<f64>,
}

impl Signature {
    /// Top `k` of `values` (assumed sorted nonincreasing and nonnegative),
    /// zero-padded to length `k`, then scaled to unit norm. An all-zero input
    /// stays zero.
    pub fn from_singular_values(values: &[f64], k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "signature length k must be >= 1".into(),
            ));
        }
        let mut top: Vec<f64> = values.iter().copied().take(k).collect();
        top.resize(k, 0.0);
        let norm = crate::matrix::l2_norm(&top);
        if norm > 0.0 {
            top.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(Self { values: top })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }
}

/// Normalized sorted singular values.
pub fn nsv_signature(a: &Matrix, k: usize) -> Result<Signature> {
    Signature::from_singular_values(&singular_values(a)?, k)
}

/// Normalized sorted unit-invariant singular values.
pub fn unsv_signature(a: &Matrix, k: usize) -> Result<Signature> {
    Signature::from_singular_values(&ui_singular_values(a)?, k)
}

/// `acos(p . q) / pi` for unit signatures; ranges over `[0, 1]` and is 1/2
/// for orthogonal vectors.
pub fn angular_distance(p: &Signature, q: &Signature) -> Result<f64> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroSignature);
    }
    if p.values.len() != q.values.len() {
        return Err(Error::ShapeMismatch {
            op: "angular_distance",
            left: (1, p.values.len()),
            right: (1, q.values.len()),
        });
    }
    // acos(p.q) = 2 atan2(|p - q|, |p + q|) for unit vectors; the atan2 form
    // keeps full precision near 0 and 1
    let diff: Vec<f64> = p.values.iter().zip(&q.values).map(|(a, b)| a - b).collect();
    let sum: Vec<f64> = p.values.iter().zip(&q.values).map(|(a, b)| a + b).collect();
    let angle = 2.0 * crate::matrix::l2_norm(&diff).atan2(crate::matrix::l2_norm(&sum));
    Ok(angle.clamp(0.0, std::f64::consts::PI) / std::f64::consts::PI)
}

/// `a ∘ uinv(a)^T`, a unit-invariant matrix signature.
pub fn hadamard_signature(a: &Matrix) -> Result<Matrix> {
    hadamard(a, &uinv(a, None)?.transpose())
}
