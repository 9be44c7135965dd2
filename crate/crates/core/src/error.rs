//! Error type shared across the crate, with CLI exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Fock index {n} exceeds cutoff {cutoff}")]
    FockOutOfRange { n: usize, cutoff: usize },

    #[error(
        "coherent state |alpha|^2 = {alpha_sq:.6} too large for Fock cutoff {cutoff}; \
         need cutoff >= {suggested}"
    )]
    CutoffTooSmall {
        alpha_sq: f64,
        cutoff: usize,
        suggested: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid propagation config: {0}")]
    InvalidConfig(String),

    #[error(
        "propagation accuracy failure: {what}; reduce dt below {suggested_dt:.3e} \
         (current {dt:.3e})"
    )]
    AccuracyFailure {
        what: String,
        dt: f64,
        suggested_dt: f64,
    },

    #[error("Bessel argument outside implementation envelope: n = {n}, x = {x} (|n| <= 200, 0 <= x <= 500)")]
    BesselDomain { n: i64, x: f64 },

    #[error("no sidebands: modulation frequency nu = 0")]
    NoSidebands,

    #[error("n_max = {0} too small: ground level sits at the manifold boundary")]
    NMaxBoundary(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error(
        "cutoff-doubling convergence failure: max change {max_delta:.3e} exceeds {limit:.1e} \
         (cutoff {cutoff} -> {doubled})"
    )]
    Convergence {
        max_delta: f64,
        limit: f64,
        cutoff: usize,
        doubled: usize,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
}

impl Error {
    /// CLI exit code: 0 success, 2 config error, 3 convergence/accuracy
    /// failure, 4 I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 4,
            Error::AccuracyFailure { .. } | Error::Convergence { .. } => 3,
            _ => 2,
        }
    }
}
