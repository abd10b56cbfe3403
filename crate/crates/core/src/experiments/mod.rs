//! Seeded Monte Carlo studies: linear fits of random polynomial maps and
//! signature robustness under row/column gain noise.
//!
//! Trials run in parallel. Trial `t` draws from `Rng::substream(seed, t)`, so
//! reports do not depend on scheduling or thread count.

mod fit;
mod signature;

pub use fit::{
    fit_experiment, fit_trial, random_polynomial_map, ExperimentReport, FitConfig, FitRow, Norm,
    PolynomialMap,
};
pub use signature::{
    signature_experiment, synth_image, NoiseConfig, SignatureReport, SignatureTrial,
};
