//! Unit-consistent generalized inverses and unit-invariant matrix
//! decompositions for dense real matrices.

#![allow(clippy::needless_range_loop)]

pub mod decomp;
pub mod error;
pub mod experiments;
pub mod inverse;
pub mod io;
pub mod matrix;
pub mod rng;
pub mod scaling;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::{abs_sign_split, hadamard, row_l2_norms, DiagonalFactor, Matrix};
