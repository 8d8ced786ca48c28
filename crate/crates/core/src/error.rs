use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("matrix is not unitary (max |M^H M - I| = {residual:e})")]
    NotUnitary { residual: f64 },

    /// The matrix fails XU membership; `line` names the first offending row or column.
    #[error("matrix is not in XU({n}): {line} sums to {}{:+}i", sum.re, sum.im)]
    NotXu { n: usize, line: String, sum: Complex64 },

    #[error("conjugated matrix leaks {leak:e} outside the diag(1, U) block")]
    OffBlockLeak { leak: f64 },

    #[error("matrix is not circulant (max shift defect {defect:e})")]
    NotCirculant { defect: f64 },

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("{what} = {value} outside {lo}..={hi}")]
    IndexOutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("unsupported dimension {n}: {reason}")]
    UnsupportedDimension { n: usize, reason: String },

    #[error("line-sum scaling did not converge after {restarts} restarts (best spread {best_spread:e})")]
    ScalingFailed { best_spread: f64, restarts: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
