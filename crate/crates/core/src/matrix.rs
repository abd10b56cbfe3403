//! Dense row-major matrices of `f64` and positive / nonsingular diagonal
//! factors.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense `rows x cols` matrix stored row-major.
///
/// Dimensions are always positive and every entry is finite when built
/// through [`Matrix::new`] or [`Matrix::from_rows`]. Arithmetic results
/// are not re-checked.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(m * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::ShapeMismatch {
                    op: "from_rows",
                    left: (i, r.len()),
                    right: (0, n),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(m, n, data)
    }

    /// Builds a matrix from a generator over `(row, col)`.
    ///
    /// Panics if either dimension is zero.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| 0.0)
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| 1.0)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diag(d: &[f64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![0.0; m * n];
        for i in 0..m {
            let out_row = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[p * n..(p + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_raw(m, n, out))
    }

    fn zip_with(
        &self,
        other: &Matrix,
        op: &'static str,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|&x| f(x)).collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Matrix {
        self.map(|x| c * x)
    }

    /// `diag(d) * self`
    pub fn scale_rows(&self, d: &[f64]) -> Result<Matrix> {
        if d.len() != self.rows {
            return Err(Error::ShapeMismatch {
                op: "scale_rows",
                left: (d.len(), d.len()),
                right: self.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            d[i] * self[(i, j)]
        }))
    }

    /// `self * diag(e)`
    pub fn scale_cols(&self, e: &[f64]) -> Result<Matrix> {
        if e.len() != self.cols {
            return Err(Error::ShapeMismatch {
                op: "scale_cols",
                left: self.shape(),
                right: (e.len(), e.len()),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)] * e[j]
        }))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Assembles `[[w, x], [y, z]]`.
    pub fn from_blocks(w: &Matrix, x: &Matrix, y: &Matrix, z: &Matrix) -> Result<Matrix> {
        if w.rows != x.rows || y.rows != z.rows || w.cols != y.cols || x.cols != z.cols {
            return Err(Error::ShapeMismatch {
                op: "from_blocks",
                left: w.shape(),
                right: z.shape(),
            });
        }
        let (k, l) = (w.rows, w.cols);
        Ok(Self::from_fn(
            w.rows + y.rows,
            w.cols + x.cols,
            |i, j| match (i < k, j < l) {
                (true, true) => w[(i, j)],
                (true, false) => x[(i, j - l)],
                (false, true) => y[(i - k, j)],
                (false, false) => z[(i - k, j - l)],
            },
        ))
    }

    /// Permutes rows and columns: result(i, j) = self(rows[i], cols[j]).
    pub fn permute(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn count_zeros(&self) -> usize {
        self.data.iter().filter(|&&x| x == 0.0).count()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Elementwise (Hadamard) product.
pub fn hadamard(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.zip_with(b, "hadamard", |x, y| x * y)
}

/// Splits `a` into entrywise magnitudes and signs in {-1, 0, 1} so that
/// `hadamard(sign, abs) == a` exactly.
pub fn abs_sign_split(a: &Matrix) -> (Matrix, Matrix) {
    let abs = a.map(f64::abs);
    let sign = a.map(|x| {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
    });
    (abs, sign)
}

pub fn row_l2_norms(a: &Matrix) -> Vec<f64> {
    (0..a.rows()).map(|i| l2_norm(a.row(i))).collect()
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    // scaled to avoid overflow/underflow on extreme magnitudes
    let scale = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// Diagonal of a square diagonal matrix.
///
/// Constructed either as positive (every entry > 0) or nonsingular
/// (every entry != 0). Both are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalFactor {
    entries: Vec<f64>,
}

impl DiagonalFactor {
    pub fn positive(entries: Vec<f64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "diagonal entry {i} = {} is not a finite positive value",
                entries[i]
            )));
        }
        Ok(Self { entries })
    }

    pub fn nonsingular(entries: Vec<f64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|&x| x == 0.0 || !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "diagonal entry {i} = {} is zero or non-finite",
                entries[i]
            )));
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_raw(entries: Vec<f64>) -> Self {
        Self { entries }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            entries: vec![1.0; n],
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|&x| x > 0.0)
    }

    pub fn inverse(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|x| 1.0 / x).collect(),
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_diag(&self.entries)
    }
}
