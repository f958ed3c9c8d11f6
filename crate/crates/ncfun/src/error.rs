use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// Variants split into input errors (bad expressions, mismatched shapes,
/// invalid arguments) and numerical failures (ill conditioning, singular
/// operators, non-convergence). The CLI maps the former to exit code 2 and
/// the latter to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("variable x{var} out of range for {num_vars} variable(s)")]
    VarOutOfRange { var: usize, num_vars: usize },

    #[error("variable/coordinate count mismatch: {left} vs {right}")]
    NumVarsMismatch { left: usize, right: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("invalid argument `{arg}`: {reason}")]
    InvalidArgument { arg: &'static str, reason: String },

    #[error("{what} is numerically ill conditioned (cond {cond:.3e} exceeds {limit:.3e})")]
    IllConditioned {
        what: &'static str,
        cond: f64,
        limit: f64,
    },

    #[error("{what} is numerically singular")]
    Singular { what: &'static str },

    #[error("tuple level {level} is not a multiple of the center level {center}")]
    IncompatibleLevels { level: usize, center: usize },

    #[error(
        "spectral gap {gap:.3e} below threshold {threshold:.3e} \
         (closest eigenvalue pair {lambda_a} and {lambda_b})"
    )]
    SpectralGapBelowThreshold {
        gap: f64,
        threshold: f64,
        lambda_a: Complex64,
        lambda_b: Complex64,
    },

    #[error("derivative operator singular at iteration {iteration} (smallest singular value {smin:.3e})")]
    SingularDerivative { iteration: usize, smin: f64 },

    #[error(
        "damping failed to reduce the residual at iteration {iteration} (residual {residual:.3e})"
    )]
    NoProgress { iteration: usize, residual: f64 },

    #[error("no convergence within {max_iter} iterations (residual {residual:.3e})")]
    MaxIterExceeded { max_iter: usize, residual: f64 },

    #[error("matrix is not self-adjoint (defect {defect:.3e} exceeds tolerance {tol:.3e})")]
    NotSelfAdjoint { defect: f64, tol: f64 },

    #[error("point lies outside the domain (block norm {norm:.6} not < 1)")]
    OutsideDomain { norm: f64 },

    #[error("intertwining premise violated (coordinate defect {defect:.3e} exceeds tolerance {tol:.3e})")]
    IntertwinerDefect { defect: f64, tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI uses for this error: 2 for input errors,
    /// 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::VarOutOfRange { .. }
            | Error::NumVarsMismatch { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidArgument { .. }
            | Error::IncompatibleLevels { .. }
            | Error::NotSelfAdjoint { .. }
            | Error::IntertwinerDefect { .. }
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::IllConditioned { .. }
            | Error::Singular { .. }
            | Error::SpectralGapBelowThreshold { .. }
            | Error::SingularDerivative { .. }
            | Error::NoProgress { .. }
            | Error::MaxIterExceeded { .. }
            | Error::OutsideDomain { .. } => 1,
        }
    }
}
