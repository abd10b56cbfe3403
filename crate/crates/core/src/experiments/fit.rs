use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inverse::rinv;
use crate::matrix::Matrix;
use crate::rng::{random_gaussian, Rng};
use crate::spectral::pinv;

const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => crate::matrix::l2_norm(v),
            Norm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" => Ok(Norm::Linf),
            other => Err(Error::InvalidArgument(format!(
                "unknown norm '{other}' (expected l1, l2 or linf)"
            ))),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        })
    }
}

/// `x -> y` with `y_j = sum_{d=1..degree} c[j][d] * (w[j][d] . x)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialMap {
    c: Vec<Vec<f64>>,
    w: Vec<Vec<Vec<f64>>>,
}

impl PolynomialMap {
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn degree(&self) -> usize {
        self.c.first().map_or(0, Vec::len)
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim(), "input length must equal map dimension");
        self.c
            .iter()
            .zip(&self.w)
            .map(|(cj, wj)| {
                cj.iter()
                    .zip(wj)
                    .enumerate()
                    .map(|(d, (c, w))| {
                        let t: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
                        c * t.powi(d as i32 + 1)
                    })
                    .sum()
            })
            .collect()
    }

    /// Applies the map to every column of `x`.
    pub fn eval_columns(&self, x: &Matrix) -> Matrix {
        let cols: Vec<Vec<f64>> = (0..x.cols()).map(|j| self.eval(&x.col(j))).collect();
        Matrix::from_fn(self.dim(), x.cols(), |i, j| cols[j][i])
    }
}

/// Random map on `R^m` with standard-normal coefficients and directions.
pub fn random_polynomial_map(m: usize, degree: usize, rng: &mut Rng) -> Result<PolynomialMap> {
    if m == 0 || degree == 0 {
        return Err(Error::InvalidArgument(
            "polynomial map needs m >= 1 and degree >= 1".into(),
        ));
    }
    let mut c = Vec::with_capacity(m);
    let mut w = Vec::with_capacity(m);
    for _ in 0..m {
        c.push((0..degree).map(|_| rng.gaussian()).collect());
        w.push(
            (0..degree)
                .map(|_| (0..m).map(|_| rng.gaussian()).collect())
                .collect(),
        );
    }
    Ok(PolynomialMap { c, w })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub m: usize,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub norm: Norm,
    pub seed: u64,
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument("m must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidArgument("n_values must not be empty".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < self.m) {
            return Err(Error::InvalidArgument(format!(
                "sample count {n} is smaller than m = {}",
                self.m
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub n: usize,
    /// Mean over successful trials of the fraction of samples where the
    /// right-consistent fit has strictly smaller error.
    pub fraction: f64,
    pub trials: usize,
    pub failed: usize,
    pub norm: Norm,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<FitRow>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        for r in &self.rows {
            if r.failed > 0 {
                out.push_str(&format!("# n={} failed_trials: {}\n", r.n, r.failed));
            }
        }
        out.push_str("n,fraction,trials,norm,m\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.n, r.fraction, r.trials, r.norm, r.m
            ));
        }
        out
    }
}

/// Fraction of the columns of `x` for which `F_R = Y rinv(X)` predicts
/// `y_i` strictly better than `F_P = Y pinv(X)`, where `Y = f(X)`. Errors
/// within a relative `1e-12` of each other count as ties, not wins.
pub fn fit_trial(x: &Matrix, map: &PolynomialMap, norm: Norm) -> Result<f64> {
    let y = map.eval_columns(x);
    let fp = y.matmul(&pinv(x, None)?)?.matmul(x)?;
    let fr = y.matmul(&rinv(x, None)?)?.matmul(x)?;
    let n = x.cols();
    let mut wins = 0usize;
    for j in 0..n {
        let yj = y.col(j);
        let err = |f: &Matrix| {
            let r: Vec<f64> = f.col(j).iter().zip(&yj).map(|(a, b)| a - b).collect();
            norm.of(&r)
        };
        let (ep, er) = (err(&fp), err(&fr));
        if ep - er > TIE_TOL * ep.max(1.0) {
            wins += 1;
        }
    }
    Ok(wins as f64 / n as f64)
}

/// Runs `cfg.trials` trials for every `n` in `cfg.n_values`. Trial `t` uses
/// the same polynomial map for every `n`, so the rows are paired.
pub fn fit_experiment(cfg: &FitConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let m = cfg.m;
    let mut rows = Vec::with_capacity(cfg.n_values.len());
    for &n in &cfg.n_values {
        let results: Vec<Result<f64>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = Rng::substream(cfg.seed, t as u64);
                let map = random_polynomial_map(m, m, &mut rng)?;
                let x = random_gaussian(m, n, &mut rng);
                fit_trial(&x, &map, cfg.norm)
            })
            .collect();
        let ok: Vec<f64> = results
            .iter()
            .filter_map(|r| r.as_ref().ok().copied())
            .collect();
        let failed = results.len() - ok.len();
        if ok.is_empty() {
            return Err(results
                .into_iter()
                .find_map(|r| r.err())
                .expect("a failure"));
        }
        rows.push(FitRow {
            n,
            fraction: ok.iter().sum::<f64>() / ok.len() as f64,
            trials: ok.len(),
            failed,
            norm: cfg.norm,
            m,
        });
    }
    Ok(ExperimentReport {
        metadata: vec![
            ("experiment".into(), "fit".into()),
            ("seed".into(), cfg.seed.to_string()),
            ("degree".into(), m.to_string()),
        ],
        rows,
    })
}
