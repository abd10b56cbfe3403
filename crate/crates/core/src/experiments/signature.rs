use rayon::prelude::*;

use crate::decomp::{angular_distance, nsv_signature, unsv_signature, Signature};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::Rng;

const MODES: usize = 8;
const MAX_FREQ: usize = 4;
const NOISE: f64 = 0.01;

fn wave(len: usize, rng: &mut Rng) -> Vec<f64> {
    let f = rng.below(MAX_FREQ + 1) as f64;
    let phase = rng.uniform_range(0.0, std::f64::consts::TAU);
    (0..len)
        .map(|t| (std::f64::consts::PI * f * t as f64 / len as f64 + phase).cos())
        .collect()
}

/// Smooth synthetic image in `[0.05, 0.95]`: a sum of random low-frequency
/// separable cosine modes plus small Gaussian noise, rescaled.
pub fn synth_image(rows: usize, cols: usize, rng: &mut Rng) -> Result<Matrix> {
    if rows < 8 || cols < 8 {
        return Err(Error::InvalidArgument(format!(
            "synthetic images must be at least 8x8, got {rows}x{cols}"
        )));
    }
    let mut img = Matrix::zeros(rows, cols);
    for _ in 0..MODES {
        let r = wave(rows, rng);
        let c = wave(cols, rng);
        let weight = rng.gaussian();
        for i in 0..rows {
            for j in 0..cols {
                img[(i, j)] += weight * r[i] * c[j];
            }
        }
    }
    for x in img.as_mut_slice() {
        *x += NOISE * rng.gaussian();
    }
    let lo = img.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = img
        .as_slice()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    Ok(img.map(|x| 0.05 + 0.9 * (x - lo) / span))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig {
    pub rows: usize,
    pub cols: usize,
    /// Signature length.
    pub k: usize,
    /// Largest ratio between any two row gains (and any two column gains).
    pub scale_spread: f64,
    /// Round corrupted images to the 8-bit grid `round(255 x) / 255`.
    pub quantize: bool,
    pub images: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            rows: 32,
            cols: 32,
            k: 5,
            scale_spread: 2.0,
            quantize: true,
            images: 3,
            trials: 100,
            seed: 0,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rows < 8 || self.cols < 8 {
            return Err(Error::InvalidArgument(
                "image size must be at least 8x8".into(),
            ));
        }
        if self.k == 0 || self.trials == 0 {
            return Err(Error::InvalidArgument("k and trials must be >= 1".into()));
        }
        if self.images < 3 {
            return Err(Error::InvalidArgument("at least 3 images per trial".into()));
        }
        if !(self.scale_spread >= 1.0 && self.scale_spread.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scale spread must be finite and >= 1, got {}",
                self.scale_spread
            )));
        }
        Ok(())
    }
}

/// Mean angular distances for one trial. Self distances compare an image
/// with its own corruption; cross distances compare it with the corruption of
/// every other image.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureTrial {
    pub nsv_self: f64,
    pub unsv_self: f64,
    pub nsv_self_max: f64,
    pub unsv_self_max: f64,
    pub nsv_cross: f64,
    pub unsv_cross: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureReport {
    pub metadata: Vec<(String, String)>,
    pub trials: Vec<SignatureTrial>,
}

impl SignatureReport {
    pub fn mean(&self, f: impl Fn(&SignatureTrial) -> f64) -> f64 {
        self.trials.iter().map(f).sum::<f64>() / self.trials.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&format!(
            "# mean nsv_self: {}\n# mean unsv_self: {}\n# mean nsv_cross: {}\n# mean unsv_cross: {}\n",
            self.mean(|t| t.nsv_self),
            self.mean(|t| t.unsv_self),
            self.mean(|t| t.nsv_cross),
            self.mean(|t| t.unsv_cross),
        ));
        out.push_str("trial,nsv_self,unsv_self,nsv_cross,unsv_cross\n");
        for (i, t) in self.trials.iter().enumerate() {
            out.push_str(&format!(
                "{i},{},{},{},{}\n",
                t.nsv_self, t.unsv_self, t.nsv_cross, t.unsv_cross
            ));
        }
        out
    }
}

fn gains(n: usize, spread: f64, rng: &mut Rng) -> Vec<f64> {
    let top = spread.ln();
    (0..n)
        .map(|_| (-rng.uniform_range(0.0, top)).exp())
        .collect()
}

fn run_trial(cfg: &NoiseConfig, rng: &mut Rng) -> Result<SignatureTrial> {
    let images = (0..cfg.images)
        .map(|_| synth_image(cfg.rows, cfg.cols, rng))
        .collect::<Result<Vec<_>>>()?;
    let row_gain = gains(cfg.rows, cfg.scale_spread, rng);
    let col_gain = gains(cfg.cols, cfg.scale_spread, rng);
    let corrupt = |img: &Matrix| -> Result<Matrix> {
        let c = img.scale_rows(&row_gain)?.scale_cols(&col_gain)?;
        Ok(if cfg.quantize {
            c.map(|x| (x.clamp(0.0, 1.0) * 255.0).round() / 255.0)
        } else {
            c
        })
    };
    let corrupted = images.iter().map(corrupt).collect::<Result<Vec<_>>>()?;

    let sigs = |f: fn(&Matrix, usize) -> Result<Signature>, set: &[Matrix]| {
        set.iter().map(|a| f(a, cfg.k)).collect::<Result<Vec<_>>>()
    };
    let nsv = (
        sigs(nsv_signature, &images)?,
        sigs(nsv_signature, &corrupted)?,
    );
    let unsv = (
        sigs(unsv_signature, &images)?,
        sigs(unsv_signature, &corrupted)?,
    );

    let stats = |(orig, corr): &(Vec<Signature>, Vec<Signature>)| -> Result<(f64, f64, f64)> {
        let n = orig.len();
        let (mut self_sum, mut self_max, mut cross_sum) = (0.0, 0.0f64, 0.0);
        for i in 0..n {
            for j in 0..n {
                let d = angular_distance(&orig[i], &corr[j])?;
                if i == j {
                    self_sum += d;
                    self_max = self_max.max(d);
                } else {
                    cross_sum += d;
                }
            }
        }
        Ok((
            self_sum / n as f64,
            self_max,
            cross_sum / (n * (n - 1)) as f64,
        ))
    };
    let (nsv_self, nsv_self_max, nsv_cross) = stats(&nsv)?;
    let (unsv_self, unsv_self_max, unsv_cross) = stats(&unsv)?;
    Ok(SignatureTrial {
        nsv_self,
        unsv_self,
        nsv_self_max,
        unsv_self_max,
        nsv_cross,
        unsv_cross,
    })
}

/// Compares NSV and UNSV signatures of synthetic images against copies
/// corrupted by one shared set of positive row and column gains.
pub fn signature_experiment(cfg: &NoiseConfig) -> Result<SignatureReport> {
    cfg.validate()?;
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, &mut Rng::substream(cfg.seed, t as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignatureReport {
        metadata: vec![
            ("experiment".into(), "signature".into()),
            ("seed".into(), cfg.seed.to_string()),
            ("size".into(), format!("{}x{}", cfg.rows, cfg.cols)),
            ("k".into(), cfg.k.to_string()),
            ("scale_spread".into(), cfg.scale_spread.to_string()),
            ("quantize".into(), cfg.quantize.to_string()),
            ("images".into(), cfg.images.to_string()),
        ],
        trials,
    })
}
