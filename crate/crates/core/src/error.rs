use std::fmt;

use thiserror::Error;

/// A single violated invariant, addressed by its config path, e.g. `[geometry].radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl FieldError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn join_fields(errors: &[FieldError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {}", join_fields(.0))]
    Invalid(Vec<FieldError>),

    #[error("segment index {index} out of range ({count} segments)")]
    SegmentIndex { index: usize, count: usize },

    #[error("interface index {index} out of range ({count} interfaces)")]
    InterfaceIndex { index: usize, count: usize },

    #[error("depth_ratio out of supported range [0, 0.7]: {0}")]
    DepthRatio(f64),

    #[error("bracket [{omega_lo}, {omega_hi}] does not straddle a sign change")]
    InvalidBracket { omega_lo: f64, omega_hi: f64 },

    #[error("matrix is numerically full rank at omega = {omega:e} (null residual {residual:e}); spurious root")]
    FullRank { omega: f64, residual: f64 },

    #[error("finite-difference grid too coarse: segment {segment} has {intervals} intervals (need at least 8)")]
    CoarseGrid { segment: usize, intervals: usize },

    #[error("finite-difference pencil has no finite eigenvalues (zero inertia)")]
    NoInertia,

    #[error("eigenvalue iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("shifted matrix is singular")]
    Singular,

    #[error("cannot derive a default frequency window: {0}")]
    NoDefaultWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
