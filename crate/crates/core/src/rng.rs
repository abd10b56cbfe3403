//! Seeded randomness.
//!
//! [`Rng`] wraps ChaCha8 seeded through `seed_from_u64`. Experiment trials
//! take their own stream from [`Rng::substream`], which seeds with
//! `seed ^ index`, so results do not depend on thread scheduling.

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{l2_norm, DiagonalFactor, Matrix};

#[derive(Debug, Clone)]
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn substream(seed: u64, index: u64) -> Self {
        Self::new(seed ^ index)
    }

    pub fn gaussian(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.0.random::<bool>()
    }

    /// Uniformly random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, self.below(i + 1));
        }
        p
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// `m x n` matrix of i.i.d. standard normal entries.
pub fn random_gaussian(m: usize, n: usize, rng: &mut Rng) -> Matrix {
    Matrix::from_fn(m, n, |_, _| rng.gaussian())
}

/// Haar-distributed orthogonal `n x n` matrix.
///
/// Gram-Schmidt (with one reorthogonalization pass) of a Gaussian matrix,
/// which is QR with the diagonal of R forced positive.
pub fn random_orthogonal(n: usize, rng: &mut Rng) -> Matrix {
    loop {
        let g = random_gaussian(n, n, rng);
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.col(j);
            let original = l2_norm(&v);
            for _ in 0..2 {
                for q in &cols {
                    let proj: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(q).for_each(|(x, qi)| *x -= proj * qi);
                }
            }
            let norm = l2_norm(&v);
            // a Gaussian column this close to the span of the others has
            // probability zero; resample rather than lose orthogonality
            if norm <= 1e-8 * original {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
        if ok {
            return Matrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Diagonal with magnitudes log-uniform in `[1e-3, 1e3]` and random signs.
pub fn random_nonsingular_diagonal(n: usize, rng: &mut Rng) -> DiagonalFactor {
    let entries = (0..n)
        .map(|_| {
            let mag = 10f64.powf(rng.uniform_range(-3.0, 3.0));
            if rng.coin() {
                mag
            } else {
                -mag
            }
        })
        .collect();
    DiagonalFactor::from_raw(entries)
}

/// Diagonal with entries log-uniform in `[1e-3, 1e3]`.
pub fn random_positive_diagonal(n: usize, rng: &mut Rng) -> DiagonalFactor {
    DiagonalFactor::from_raw(
        (0..n)
            .map(|_| 10f64.powf(rng.uniform_range(-3.0, 3.0)))
            .collect(),
    )
}
