use thiserror::Error;

/// Errors raised across the compiler, the validators and the dynamics engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Fock cutoff: {0}")]
    InvalidCutoff(String),

    #[error("invalid system parameters: {0}")]
    InvalidParams(String),

    #[error("invalid drive configuration: {0}")]
    InvalidDrive(String),

    #[error("transition ({k1}, {k2}) is not one of the four sideband types")]
    UnsupportedTransition { k1: i32, k2: i32 },

    #[error("maximum photon number must be at least 1, got {0}")]
    InvalidPhotonNumber(i64),

    #[error("target state is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("target amplitude at ({n1}, {n2}) lies outside the triangle n1 + n2 <= {n_max}")]
    OutsideTriangle { n1: u32, n2: u32, n_max: u32 },

    #[error("zero Rabi amplitude on step {step} ({k1}, {k2}) at Fock pair ({n1}, {n2})")]
    ZeroRabiAmplitude { step: usize, k1: i32, k2: i32, n1: u32, n2: u32 },

    #[error("phase solver found no root (rhs = {rhs}, x = {x})")]
    PhaseNotFound { rhs: f64, x: f64 },

    #[error("synthesis left residual population {residual:e} outside |0,0>|g>")]
    SynthesisResidual { residual: f64 },

    #[error("frequencies are incommensurate: no ratio with denominator <= {max_denominator} within tolerance {tolerance:e}")]
    Incommensurate { max_denominator: u64, tolerance: f64 },

    #[error("division by zero: main Rabi amplitude vanishes for transition ({k1}, {k2})")]
    VanishingMainAmplitude { k1: i32, k2: i32 },

    #[error("state space mismatch: expected dimension {expected}, got {actual}")]
    SpaceMismatch { expected: usize, actual: usize },

    #[error("integrator failed at t = {t:e} s: {reason}")]
    Integrator { t: f64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
