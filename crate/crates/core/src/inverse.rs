//! Unit-consistent generalized inverses.
//!
//! | inverse | consistent under | construction |
//! |---------|------------------|--------------|
//! | [`linv`] | `A -> D A` (D nonsingular diagonal), `A -> A V` (V orthogonal) | `pinv(L A) L`, `L` = row normalization |
//! | [`rinv`] | `A -> A D`, `A -> U A` | `linv(A^T)^T` |
//! | [`uinv`] | `A -> D A E` | `R pinv(L A R) L`, `L`, `R` from [`dscale`] |
//! | [`block_uc_inverse`] | `A -> T1 A T2`, `T = blockdiag(D, Q)` | mixed `uinv`/`pinv` partitioned formula |
//!
//! Every function takes the relative rank tolerance used by its `pinv`
//! calls; `None` selects the spectral default.

use crate::error::{Error, Result};
use crate::matrix::{l2_norm, row_l2_norms, Matrix};
use crate::scaling::{dscale, left_scale, DiagonalScaling, ScalingOptions};
use crate::spectral::{pinv, singular_values};

/// Left unit-consistent generalized inverse.
pub fn linv(a: &Matrix, tol: Option<f64>) -> Result<Matrix> {
    let d = left_scale(a);
    let scaled = a.scale_rows(d.entries())?;
    pinv(&scaled, tol)?.scale_cols(d.entries())
}

/// Right unit-consistent generalized inverse.
pub fn rinv(a: &Matrix, tol: Option<f64>) -> Result<Matrix> {
    Ok(linv(&a.transpose(), tol)?.transpose())
}

/// General unit-consistent generalized inverse.
///
/// Fails with [`Error::ScalingNoConvergence`] if the diagonal scaling does
/// not converge within the default sweep cap.
pub fn uinv(a: &Matrix, tol: Option<f64>) -> Result<Matrix> {
    let scaling = dscale(a, ScalingOptions::default())?.require_converged()?;
    uinv_from_scaling(&scaling, tol)
}

/// `diag(right) * pinv(scaled) * diag(left)` for a precomputed scaling.
pub fn uinv_from_scaling(scaling: &DiagonalScaling, tol: Option<f64>) -> Result<Matrix> {
    pinv(&scaling.scaled, tol)?
        .scale_rows(scaling.right.entries())?
        .scale_cols(scaling.left.entries())
}

/// Number of leading state variables (rows/columns) whose units are
/// incommensurate; the rest share a Euclidean frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSplit {
    pub k: usize,
}

/// Default relative tolerance for [`block_uc_inverse`]. The Schur
/// complements carry rounding from several products, so their noise floor
/// sits well above `eps`.
pub const BLOCK_DEFAULT_TOL: f64 = 1e-10;

/// Generalized inverse of a square matrix partitioned as `[[W, X], [Y, Z]]`
/// with `W` of size `k x k`:
///
/// ```text
/// [ uinv(W - X Z+ Y)              -uinv(W) X pinv(Z - Y uinv(W) X) ]
/// [ -pinv(Z) Y uinv(W - X Z+ Y)    pinv(Z - Y uinv(W) X)           ]
/// ```
///
/// It is consistent with `A -> T1 A T2` for `T = blockdiag(D, Q)`, `D`
/// nonsingular diagonal and `Q` orthogonal. `k == n` reduces to [`uinv`]
/// and `k == 0` to [`pinv`].
///
/// `tol` (default [`BLOCK_DEFAULT_TOL`]) is the relative rank cutoff for
/// every intermediate inverse. Schur complement entries no larger than `tol`
/// times the magnitude of the terms they were formed from are set to zero,
/// which keeps exactly singular complements from being inverted as noise.
pub fn block_uc_inverse(a: &Matrix, split: BlockSplit, tol: Option<f64>) -> Result<Matrix> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(Error::NotSquare {
            op: "block_uc_inverse",
            rows,
            cols,
        });
    }
    let n = rows;
    let k = split.k;
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "block split {k} out of range for a {n}x{n} matrix"
        )));
    }
    if k == n {
        return uinv(a, tol);
    }
    if k == 0 {
        return pinv(a, tol);
    }
    let tol = tol.unwrap_or(BLOCK_DEFAULT_TOL);
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be finite and >= 0, got {tol}"
        )));
    }

    let w = a.submatrix(0, k, 0, k);
    let x = a.submatrix(0, k, k, n);
    let y = a.submatrix(k, n, 0, k);
    let z = a.submatrix(k, n, k, n);
    let x_rows = row_l2_norms(&x);
    let y_cols = row_l2_norms(&y.transpose());

    let z_p = pinv(&z, Some(tol))?;
    let w_u = uinv(&w, Some(tol))?;

    // entry (i, j) of X Z+ Y is bounded by |X_i,:| ||Z+||_2 |Y_:,j|
    let z_p_norm = singular_values(&z_p)?[0];
    let mut w_schur = w.sub(&x.matmul(&z_p)?.matmul(&y)?)?;
    for i in 0..k {
        for j in 0..k {
            let bound = w[(i, j)].abs() + x_rows[i] * z_p_norm * y_cols[j];
            if w_schur[(i, j)].abs() <= tol * bound {
                w_schur[(i, j)] = 0.0;
            }
        }
    }

    // ||Y uinv(W) X|| <= sum |uinv(W)_ij| |Y_:,i| |X_j,:|
    let mut z_schur = z.sub(&y.matmul(&w_u)?.matmul(&x)?)?;
    let mut bound = frobenius(&z);
    for i in 0..k {
        for j in 0..k {
            bound += w_u[(i, j)].abs() * y_cols[i] * x_rows[j];
        }
    }
    if frobenius(&z_schur) <= tol * bound {
        z_schur = Matrix::zeros(n - k, n - k);
    }

    let top_left = uinv(&w_schur, Some(tol))?;
    let bottom_right = pinv(&z_schur, Some(tol))?;

    let top_right = w_u.matmul(&x)?.matmul(&bottom_right)?.scale(-1.0);
    let bottom_left = z_p.matmul(&y)?.matmul(&top_left)?.scale(-1.0);
    Matrix::from_blocks(&top_left, &top_right, &bottom_left, &bottom_right)
}

fn frobenius(a: &Matrix) -> f64 {
    l2_norm(a.as_slice())
}
