use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("data length {len} does not match {rows}x{cols}")]
    DataLength {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{op}: shape mismatch {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("SVD did not converge after {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },

    #[error(
        "eigenvalue QR iteration did not converge (eigenvalue {index}, {iterations} iterations)"
    )]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("entry ({row}, {col}) is zero; closed-form scaling needs an elemental-nonzero matrix, use dscale")]
    ZeroEntry { row: usize, col: usize },

    #[error("diagonal scaling did not converge after {sweeps} sweeps (residual {residual:e})")]
    ScalingNoConvergence { sweeps: usize, residual: f64 },

    #[error("angular distance is undefined for a zero signature")]
    ZeroSignature,
}

impl Error {
    /// True for failures of an iterative numerical method, as opposed to
    /// bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SvdNoConvergence { .. }
                | Error::EigenNoConvergence { .. }
                | Error::ScalingNoConvergence { .. }
        )
    }
}
