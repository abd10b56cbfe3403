//! Eigenvalues of small real square matrices: Householder reduction to
//! upper Hessenberg form followed by Francis double-shift QR.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const MAX_EIGEN_DIM: usize = 64;
const MAX_ITS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn dist(self, other: Complex) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }
}

/// Multiset of eigenvalues. Complex values of real input come in conjugate
/// pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSet {
    pub values: Vec<Complex>,
}

impl EigenSet {
    pub fn sum(&self) -> Complex {
        self.values.iter().fold(Complex::new(0.0, 0.0), |acc, z| {
            Complex::new(acc.re + z.re, acc.im + z.im)
        })
    }

    pub fn product(&self) -> Complex {
        self.values.iter().fold(Complex::new(1.0, 0.0), |acc, z| {
            Complex::new(acc.re * z.re - acc.im * z.im, acc.re * z.im + acc.im * z.re)
        })
    }

    /// Largest distance between paired values after greedy nearest-pairing.
    pub fn match_distance(&self, other: &EigenSet) -> f64 {
        if self.values.len() != other.values.len() {
            return f64::INFINITY;
        }
        let mut remaining = other.values.clone();
        let mut worst = 0.0f64;
        for z in &self.values {
            let (idx, d) = remaining
                .iter()
                .enumerate()
                .map(|(i, w)| (i, z.dist(*w)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("equal lengths");
            worst = worst.max(d);
            remaining.swap_remove(idx);
        }
        worst
    }
}

/// Reduces `h` (n x n, row-major in a Vec of rows) to upper Hessenberg form
/// in place by Householder similarity transforms.
fn hessenberg(h: &mut [Vec<f64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let scale: f64 = (k + 1..n).map(|i| h[i][k].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut v: Vec<f64> = (k + 1..n).map(|i| h[i][k] / scale).collect();
        let alpha = {
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if v[0] > 0.0 {
                -nrm
            } else {
                nrm
            }
        };
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        // H <- P H P with P = I - 2 v v^T / v^T v acting on rows/cols k+1..n
        for j in 0..n {
            let s: f64 = (0..v.len()).map(|r| v[r] * h[k + 1 + r][j]).sum::<f64>() * 2.0 / vtv;
            for r in 0..v.len() {
                h[k + 1 + r][j] -= s * v[r];
            }
        }
        for row in h.iter_mut() {
            let s: f64 = (0..v.len()).map(|r| row[k + 1 + r] * v[r]).sum::<f64>() * 2.0 / vtv;
            for r in 0..v.len() {
                row[k + 1 + r] -= s * v[r];
            }
        }
        for i in k + 2..n {
            h[i][k] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix. Uses 1-based
/// indices internally (`a` is (n+1) x (n+1), row/col 0 unused).
fn hqr(a: &mut [Vec<f64>], n: usize) -> Result<Vec<Complex>> {
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += a[i][j].abs();
        }
    }

    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            y = a[nn - 1][nn - 1];
            w = a[nn][nn - 1] * a[nn - 1][nn];
            if l == nn - 1 {
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }

            if its == MAX_ITS {
                return Err(Error::EigenNoConvergence {
                    index: nn,
                    iterations: its,
                });
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift
                t += x;
                for i in 1..=nn {
                    a[i][i] -= x;
                }
                let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            let mut m = nn - 2;
            loop {
                z = a[m][m];
                r = x - z;
                let s = y - z;
                p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - r - s;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = 0.0;
                    if k != nn - 1 {
                        r = a[k + 2][k - 1];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = a[k][j] + q * a[k + 1][j];
                        if k != nn - 1 {
                            p += r * a[k + 2][j];
                            a[k + 2][j] -= p * z;
                        }
                        a[k + 1][j] -= p * y;
                        a[k][j] -= p * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        p = x * a[i][k] + y * a[i][k + 1];
                        if k != nn - 1 {
                            p += z * a[i][k + 2];
                            a[i][k + 2] -= p * r;
                        }
                        a[i][k + 1] -= p * q;
                        a[i][k] -= p;
                    }
                }
                k += 1;
            }
            if l >= nn - 1 {
                break;
            }
        }
    }

    Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
}

/// Eigenvalues of a square matrix of dimension at most [`MAX_EIGEN_DIM`].
pub fn eigenvalues(a: &Matrix) -> Result<EigenSet> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(Error::NotSquare {
            op: "eigenvalues",
            rows,
            cols,
        });
    }
    if rows > MAX_EIGEN_DIM {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues: dimension {rows} exceeds {MAX_EIGEN_DIM}"
        )));
    }
    let n = rows;
    let mut h: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    hessenberg(&mut h);

    let mut one_based = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..n {
        one_based[i + 1][1..].copy_from_slice(&h[i]);
    }
    let mut values = hqr(&mut one_based, n)?;
    values.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(EigenSet { values })
}
