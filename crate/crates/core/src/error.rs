use thiserror::Error;

/// Errors raised by operator construction, solvers and sweeps.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("no kernel vector below tolerance {tol:e} (smallest singular value {smallest:e})")]
    EmptyKernel { tol: f64, smallest: f64 },

    #[error("steady state is not unique: kernel dimension {0}")]
    DegenerateKernel(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("step size underflow at t={t:e} (h={h:e}); max frequency / min rate = {ratio:e}")]
    StepUnderflow { t: f64, h: f64, ratio: f64 },

    #[error("trajectory norm underflow at t={t:e}")]
    NormUnderflow { t: f64 },

    #[error("steady state not converged: residual {residual:e} at t={t:e}")]
    NotConverged { residual: f64, t: f64 },

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("linear algebra backend failure: {0}")]
    Backend(String),
}

pub type Result<T> = std::result::Result<T, Error>;
