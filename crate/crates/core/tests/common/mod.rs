#![allow(dead_code)]

use nalgebra::DMatrix;
use unitcon::rng::{random_gaussian, Rng};
use unitcon::{DiagonalFactor, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Dense,
    ZeroEntries,
    ZeroLines,
    RankDeficient,
}

pub const CLASSES: [Class; 4] = [
    Class::Dense,
    Class::ZeroEntries,
    Class::ZeroLines,
    Class::RankDeficient,
];

/// Random matrix of the given class with dimensions in `1..=max_dim`.
pub fn random_of_class(class: Class, max_dim: usize, rng: &mut Rng) -> Matrix {
    let m = 1 + rng.below(max_dim);
    let n = 1 + rng.below(max_dim);
    match class {
        Class::Dense => random_gaussian(m, n, rng),
        Class::ZeroEntries => {
            let mut a = random_gaussian(m, n, rng);
            for i in 0..m {
                for j in 0..n {
                    if rng.uniform() < 0.3 {
                        a[(i, j)] = 0.0;
                    }
                }
            }
            a
        }
        Class::ZeroLines => {
            let (m, n) = (m.max(2), n.max(2));
            let mut a = random_gaussian(m, n, rng);
            let (zi, zj) = (rng.below(m), rng.below(n));
            for j in 0..n {
                a[(zi, j)] = 0.0;
            }
            for i in 0..m {
                a[(i, zj)] = 0.0;
            }
            a
        }
        Class::RankDeficient => {
            let (m, n) = (m.max(2), n.max(2));
            let r = 1 + rng.below(m.min(n) - 1);
            random_gaussian(m, r, rng)
                .matmul(&random_gaussian(r, n, rng))
                .unwrap()
        }
    }
}

/// `count` matrices cycling through every class.
pub fn sweep(count: usize, max_dim: usize, rng: &mut Rng) -> Vec<(Class, Matrix)> {
    (0..count)
        .map(|i| {
            let c = CLASSES[i % CLASSES.len()];
            (c, random_of_class(c, max_dim, rng))
        })
        .collect()
}

/// `||a - b||_max / ||b||_max`, or the absolute difference when `b` is zero.
pub fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    let d = a.max_abs_diff(b).unwrap();
    let s = b.max_abs();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

pub fn dae(a: &Matrix, d: &DiagonalFactor, e: &DiagonalFactor) -> Matrix {
    a.scale_rows(d.entries())
        .unwrap()
        .scale_cols(e.entries())
        .unwrap()
}

pub fn to_na(a: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

pub fn from_na(a: &DMatrix<f64>) -> Matrix {
    Matrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Dense inverse computed by nalgebra's LU.
pub fn oracle_inverse(a: &Matrix) -> Matrix {
    from_na(&to_na(a).try_inverse().expect("nonsingular"))
}

/// `[[D, 0], [0, Q]]`.
pub fn blockdiag(d: &[f64], q: &Matrix) -> Matrix {
    let k = d.len();
    let n = k + q.rows();
    Matrix::from_fn(n, n, |i, j| match (i < k, j < k) {
        (true, true) if i == j => d[i],
        (false, false) => q[(i - k, j - k)],
        _ => 0.0,
    })
}
