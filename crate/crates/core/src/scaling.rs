//! Diagonal scale functions.
//!
//! * [`left_scale`]: row normalization by the Euclidean norm, the left-only
//!   scaling that is invariant to left diagonal and right orthogonal changes.
//! * [`su_closed_form`]: the closed-form joint scaling of a matrix with no
//!   zero entries, built from row, column and grand means of `log|a|`.
//! * [`dscale`]: the general joint scaling. Alternating log-domain balancing
//!   over the nonzero pattern until every nonzero row and column of the
//!   scaled matrix has a product of magnitudes equal to one. Zero rows and
//!   columns get scale 1.
//! * [`generalized_sinkhorn`]: the same alternation driven by an arbitrary
//!   composable size function (geometric mean, normalized p-norm, or the
//!   `s_{a,b}` ratio of power sums).
//!
//! The scaled matrix `left * a * right` is unique even where the factors are
//! not; the factors of [`dscale`] and [`su_closed_form`] may differ by a
//! reciprocal scalar.

use crate::error::{Error, Result};
use crate::matrix::{abs_sign_split, row_l2_norms, DiagonalFactor, Matrix};

pub const DEFAULT_TOL: f64 = 1e-15;
pub const DEFAULT_MAX_SWEEPS: usize = 1000;

/// Positive left/right factors and the scaled matrix `diag(left) * a * diag(right)`.
#[derive(Debug, Clone)]
pub struct DiagonalScaling {
    pub left: DiagonalFactor,
    pub right: DiagonalFactor,
    pub scaled: Matrix,
    pub converged: bool,
    /// Sweeps performed (0 for closed-form scalings).
    pub iterations: usize,
    /// Adjustment measured in the final sweep.
    pub residual: f64,
}

impl DiagonalScaling {
    /// The rank-1 positive matrix `left * right^T` whose Hadamard product
    /// with `a` is the scaled matrix.
    pub fn rank_one_factor(&self) -> Matrix {
        let (l, r) = (self.left.entries(), self.right.entries());
        Matrix::from_fn(l.len(), r.len(), |i, j| l[i] * r[j])
    }

    /// Turns a non-converged result into [`Error::ScalingNoConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::ScalingNoConvergence {
                sweeps: self.iterations,
                residual: self.residual,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScalingOptions {
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }
}

impl ScalingOptions {
    fn validate(&self) -> Result<()> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tol must be > 0, got {}",
                self.tol
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be >= 1".into()));
        }
        Ok(())
    }
}

/// `1 / ||row i||_2` for nonzero rows, 1 for zero rows.
pub fn left_scale(a: &Matrix) -> DiagonalFactor {
    let entries = row_l2_norms(a)
        .into_iter()
        .map(|n| if n > 0.0 { 1.0 / n } else { 1.0 })
        .collect();
    DiagonalFactor::from_raw(entries)
}

/// Closed-form joint scaling for a matrix without zero entries.
///
/// With `L = log|a|`, row means `r`, column means `c` and grand mean `mu`,
/// the factors are `exp(mu/2 - r_i)` and `exp(mu/2 - c_j)`.
pub fn su_closed_form(a: &Matrix) -> Result<DiagonalScaling> {
    let (m, n) = a.shape();
    if let Some(pos) = a.as_slice().iter().position(|&x| x == 0.0) {
        return Err(Error::ZeroEntry {
            row: pos / n,
            col: pos % n,
        });
    }
    let logs = a.map(|x| x.abs().ln());
    let row_mean: Vec<f64> = (0..m)
        .map(|i| logs.row(i).iter().sum::<f64>() / n as f64)
        .collect();
    let col_mean: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| logs[(i, j)]).sum::<f64>() / m as f64)
        .collect();
    let grand = row_mean.iter().sum::<f64>() / m as f64;

    let u: Vec<f64> = row_mean.iter().map(|r| 0.5 * grand - r).collect();
    let v: Vec<f64> = col_mean.iter().map(|c| 0.5 * grand - c).collect();
    let scaled = Matrix::from_fn(m, n, |i, j| {
        a[(i, j)].signum() * (logs[(i, j)] + u[i] + v[j]).exp()
    });
    Ok(DiagonalScaling {
        left: DiagonalFactor::from_raw(u.iter().map(|x| x.exp()).collect()),
        right: DiagonalFactor::from_raw(v.iter().map(|x| x.exp()).collect()),
        scaled,
        converged: true,
        iterations: 0,
        residual: 0.0,
    })
}

fn mean_abs(values: impl Iterator<Item = f64>) -> f64 {
    mean(values.map(f64::abs))
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// General joint diagonal scaling of an arbitrary matrix.
///
/// Each sweep first subtracts the mean log-magnitude of every nonzero
/// column, then of every nonzero row, accumulating the negated means into
/// the log factors. Stops when the sum of the two mean absolute adjustments
/// drops to `opts.tol`. If `opts.max_sweeps` is reached first the result is
/// returned with `converged == false`.
///
/// The factors are only determined up to `left * c`, `right / c`; the
/// returned pair has equal mean log over nonzero rows and columns, which
/// matches [`su_closed_form`] when `a` has no zeros.
pub fn dscale(a: &Matrix, opts: ScalingOptions) -> Result<DiagonalScaling> {
    opts.validate()?;
    let (m, n) = a.shape();
    let (abs, sign) = abs_sign_split(a);
    let mask: Vec<bool> = abs.as_slice().iter().map(|&x| x > 0.0).collect();
    let mut logs: Vec<f64> = abs
        .as_slice()
        .iter()
        .map(|&x| if x > 0.0 { x.ln() } else { 0.0 })
        .collect();
    let row_count: Vec<usize> = (0..m)
        .map(|i| mask[i * n..(i + 1) * n].iter().filter(|&&b| b).count())
        .collect();
    let col_count: Vec<usize> = (0..n)
        .map(|j| (0..m).filter(|&i| mask[i * n + j]).count())
        .collect();

    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let mut dx = 2.0 * opts.tol;
    let mut sweeps = 0;
    let mut converged = false;
    let mut col_adj = vec![0.0; n];
    let mut row_adj = vec![0.0; m];

    while sweeps < opts.max_sweeps {
        sweeps += 1;
        for j in 0..n {
            col_adj[j] = 0.0;
            if col_count[j] == 0 {
                continue;
            }
            let p = (0..m).map(|i| logs[i * n + j]).sum::<f64>() / col_count[j] as f64;
            for i in 0..m {
                if mask[i * n + j] {
                    logs[i * n + j] -= p;
                }
            }
            v[j] -= p;
            col_adj[j] = p;
        }
        dx = mean_abs((0..n).filter(|&j| col_count[j] > 0).map(|j| col_adj[j]));

        for i in 0..m {
            row_adj[i] = 0.0;
            if row_count[i] == 0 {
                continue;
            }
            let row = &mut logs[i * n..(i + 1) * n];
            let p = row.iter().sum::<f64>() / row_count[i] as f64;
            for (x, &on) in row.iter_mut().zip(&mask[i * n..(i + 1) * n]) {
                if on {
                    *x -= p;
                }
            }
            u[i] -= p;
            row_adj[i] = p;
        }
        dx += mean_abs((0..m).filter(|&i| row_count[i] > 0).map(|i| row_adj[i]));

        if dx <= opts.tol {
            converged = true;
            break;
        }
    }

    // split the free scalar evenly between the two sides
    let mean_u = mean((0..m).filter(|&i| row_count[i] > 0).map(|i| u[i]));
    let mean_v = mean((0..n).filter(|&j| col_count[j] > 0).map(|j| v[j]));
    let shift = (mean_v - mean_u) / 2.0;
    for i in (0..m).filter(|&i| row_count[i] > 0) {
        u[i] += shift;
    }
    for j in (0..n).filter(|&j| col_count[j] > 0) {
        v[j] -= shift;
    }

    let scaled = Matrix::from_fn(m, n, |i, j| sign[(i, j)] * logs[i * n + j].exp());
    Ok(DiagonalScaling {
        left: DiagonalFactor::from_raw(u.iter().map(|x| x.exp()).collect()),
        right: DiagonalFactor::from_raw(v.iter().map(|x| x.exp()).collect()),
        scaled,
        converged,
        iterations: sweeps,
        residual: dx,
    })
}

/// A nonnegative composable size function: homogeneous of degree one and
/// equal to 1 on every nonzero 0/1 vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeFunction {
    /// Geometric mean of the nonzero magnitudes.
    Geometric,
    /// `||u||_p / |S|^(1/p)`, `S` the nonzero support.
    PMean(f64),
    /// `(sum |u|^(a+b) / sum |u|^a)^(1/b)`.
    Ab { a: f64, b: f64 },
}

impl SizeFunction {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SizeFunction::Geometric => Ok(()),
            SizeFunction::PMean(p) if p > 0.0 && p.is_finite() => Ok(()),
            SizeFunction::Ab { a, b } if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() => {
                Ok(())
            }
            other => Err(Error::InvalidArgument(format!(
                "invalid size function {other:?}"
            ))),
        }
    }
}

/// Evaluates `size` on `u`. The zero vector has size 0.
pub fn size_value(size: SizeFunction, u: &[f64]) -> f64 {
    let nonzero = || u.iter().filter(|&&x| x != 0.0).map(|x| x.abs());
    let support = nonzero().count();
    if support == 0 {
        return 0.0;
    }
    match size {
        SizeFunction::Geometric => (nonzero().map(f64::ln).sum::<f64>() / support as f64).exp(),
        SizeFunction::PMean(p) => {
            // factor out the max magnitude to keep powers representable
            let top = nonzero().fold(0.0f64, f64::max);
            let sum: f64 = nonzero().map(|x| (x / top).powf(p)).sum();
            top * (sum / support as f64).powf(1.0 / p)
        }
        SizeFunction::Ab { a, b } => {
            let top = nonzero().fold(0.0f64, f64::max);
            let num: f64 = nonzero().map(|x| (x / top).powf(a + b)).sum();
            let den: f64 = nonzero().map(|x| (x / top).powf(a)).sum();
            top * (num / den).powf(1.0 / b)
        }
    }
}

/// Sinkhorn-type alternation: divide every nonzero column, then every
/// nonzero row, by its size until the mean absolute log-adjustment per
/// sweep (columns plus rows) is at most `opts.tol`.
///
/// Only [`SizeFunction::Geometric`] is known to reach the unique scaling
/// that [`dscale`] computes; the other kinds are experimental.
pub fn generalized_sinkhorn(
    a: &Matrix,
    size: SizeFunction,
    opts: ScalingOptions,
) -> Result<DiagonalScaling> {
    opts.validate()?;
    size.validate()?;
    let (m, n) = a.shape();
    let (mut work, sign) = abs_sign_split(a);
    let mut left = vec![1.0; m];
    let mut right = vec![1.0; n];
    let mut dx = f64::INFINITY;
    let mut sweeps = 0;
    let mut converged = false;

    while sweeps < opts.max_sweeps {
        sweeps += 1;

        let mut adj = Vec::with_capacity(n);
        for j in 0..n {
            let s = size_value(size, &work.col(j));
            if s == 0.0 {
                continue;
            }
            for i in 0..m {
                work[(i, j)] /= s;
            }
            right[j] /= s;
            adj.push(s.ln());
        }
        dx = mean_abs(adj.into_iter());

        let mut adj = Vec::with_capacity(m);
        for i in 0..m {
            let s = size_value(size, work.row(i));
            if s == 0.0 {
                continue;
            }
            for j in 0..n {
                work[(i, j)] /= s;
            }
            left[i] /= s;
            adj.push(s.ln());
        }
        dx += mean_abs(adj.into_iter());

        if dx <= opts.tol {
            converged = true;
            break;
        }
    }

    let scaled = Matrix::from_fn(m, n, |i, j| sign[(i, j)] * work[(i, j)]);
    Ok(DiagonalScaling {
        left: DiagonalFactor::from_raw(left),
        right: DiagonalFactor::from_raw(right),
        scaled,
        converged,
        iterations: sweeps,
        residual: dx,
    })
}

/// Largest deviation from 1 of `|product of nonzeros|` over all nonzero rows
/// and columns, computed in the log domain.
pub fn unit_product_deviation(s: &Matrix) -> f64 {
    let (m, n) = s.shape();
    let log_prod = |vals: Vec<f64>| -> Option<f64> {
        let nz: Vec<f64> = vals.into_iter().filter(|&x| x != 0.0).collect();
        (!nz.is_empty()).then(|| nz.iter().map(|x| x.abs().ln()).sum())
    };
    let rows = (0..m).filter_map(|i| log_prod(s.row(i).to_vec()));
    let cols = (0..n).filter_map(|j| log_prod(s.col(j)));
    rows.chain(cols)
        .map(|lp| (lp.exp() - 1.0).abs())
        .fold(0.0, f64::max)
}
