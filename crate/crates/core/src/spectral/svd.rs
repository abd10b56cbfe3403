//! One-sided (Hestenes) Jacobi SVD.
//!
//! Columns of the working copy are rotated pairwise until every pair is
//! orthogonal to `1e-15` relative to the product of their norms. Columns
//! whose norm has fallen to `eps * ||a||_F` are numerically zero and are no
//! longer rotated. The column norms are then the singular values.

use crate::error::{Error, Result};
use crate::matrix::{l2_norm, Matrix};

const MAX_SWEEPS: usize = 60;

type Columns = Vec<Vec<f64>>;
const ROTATION_TOL: f64 = 1e-15;

/// Full SVD `a = u * diag(s) * v^T` with square orthogonal `u` (m x m) and
/// `v` (n x n). `s` has `min(m, n)` entries, nonincreasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    /// `u * diag(s) * v^T`, padding `s` with zeros to the rectangular shape.
    pub fn reconstruct(&self) -> Matrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        Matrix::from_fn(m, n, |i, j| {
            self.s
                .iter()
                .enumerate()
                .map(|(k, s)| self.u[(i, k)] * s * self.v[(j, k)])
                .sum()
        })
    }
}

/// Economy SVD: `u` is m x k, `v` is n x k with k = min(m, n). Columns of
/// `u` belonging to singular values at the rounding floor are not
/// meaningful; use [`svd`] when an orthogonal `u` is needed.
#[derive(Debug, Clone)]
pub(crate) struct ThinSvd {
    pub u: Vec<Vec<f64>>,
    pub s: Vec<f64>,
    pub v: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(a: &mut [f64], b: &mut [f64], c: f64, s: f64) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xv, yv) = (*x, *y);
        *x = c * xv - s * yv;
        *y = s * xv + c * yv;
    }
}

/// Orthogonalizes the columns of a tall (rows >= cols) matrix given as a list
/// of columns. Returns the rotated columns and the accumulated right factor
/// (as columns).
fn jacobi_columns(mut cols: Columns) -> Result<(Columns, Columns)> {
    let n = cols.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let frob = l2_norm(&cols.iter().map(|c| l2_norm(c)).collect::<Vec<_>>());
    let floor = (f64::EPSILON * frob).powi(2);

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= ROTATION_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s);
                let (left, right) = v.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s);
            }
        }
        if !rotated {
            return Ok((cols, v));
        }
    }
    Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS })
}

pub(crate) fn thin_svd(a: &Matrix) -> Result<ThinSvd> {
    let (m, n) = a.shape();
    let transposed = m < n;
    let work = if transposed { a.transpose() } else { a.clone() };
    let cols: Vec<Vec<f64>> = (0..work.cols()).map(|j| work.col(j)).collect();
    let (cols, v) = jacobi_columns(cols)?;

    let norms: Vec<f64> = cols.iter().map(|c| l2_norm(c)).collect();
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let s: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let left: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let nrm = norms[i];
            if nrm > 0.0 {
                cols[i].iter().map(|x| x / nrm).collect()
            } else {
                vec![0.0; cols[i].len()]
            }
        })
        .collect();
    let right: Vec<Vec<f64>> = order.iter().map(|&i| v[i].clone()).collect();

    Ok(if transposed {
        ThinSvd {
            u: right,
            s,
            v: left,
        }
    } else {
        ThinSvd {
            u: left,
            s,
            v: right,
        }
    })
}

/// Extends `basis` (orthonormal vectors of length `dim`) to a full
/// orthonormal basis, choosing each new vector as the coordinate axis with
/// the largest component outside the current span.
fn complete_basis(mut basis: Vec<Vec<f64>>, dim: usize) -> Vec<Vec<f64>> {
    while basis.len() < dim {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for axis in 0..dim {
            let mut e = vec![0.0; dim];
            e[axis] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let proj = dot(b, &e);
                    e.iter_mut().zip(b).for_each(|(x, bi)| *x -= proj * bi);
                }
            }
            let nrm = l2_norm(&e);
            if best.as_ref().is_none_or(|(bn, _)| nrm > *bn) {
                best = Some((nrm, e));
            }
        }
        let (nrm, mut e) = best.expect("dim > 0");
        e.iter_mut().for_each(|x| *x /= nrm);
        basis.push(e);
    }
    basis
}

fn columns_to_matrix(cols: &[Vec<f64>], rows: usize) -> Matrix {
    Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Full singular value decomposition.
pub fn svd(a: &Matrix) -> Result<Svd> {
    let (m, n) = a.shape();
    let thin = thin_svd(a)?;
    let k = thin.s.len();
    let floor = thin.s.first().copied().unwrap_or(0.0) * (m.max(n) as f64) * f64::EPSILON;

    // vectors paired with singular values at the rounding floor carry no
    // reliable direction; keep them only on the side that came from the
    // accumulated rotations (always orthonormal)
    let (u_keep, v_keep) = if m >= n {
        let keep: Vec<Vec<f64>> = (0..k)
            .take_while(|&i| thin.s[i] > floor)
            .map(|i| thin.u[i].clone())
            .collect();
        (keep, thin.v.clone())
    } else {
        let keep: Vec<Vec<f64>> = (0..k)
            .take_while(|&i| thin.s[i] > floor)
            .map(|i| thin.v[i].clone())
            .collect();
        (thin.u.clone(), keep)
    };
    let u = complete_basis(u_keep, m);
    let v = complete_basis(v_keep, n);
    Ok(Svd {
        u: columns_to_matrix(&u, m),
        s: thin.s,
        v: columns_to_matrix(&v, n),
    })
}

pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(thin_svd(a)?.s)
}
