use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    /// A parameter violates one of its invariants; the message names it.
    #[error("{0}")]
    Invalid(String),

    #[error("bubble radius must be positive, got {0:e} m")]
    NonPositiveRadius(f64),

    #[error("model `{0}` has no h0 form; use the volume oscillator right-hand side")]
    NoPressureForm(&'static str),

    #[error("state outside the sampling band: {0}")]
    OutOfBand(String),

    #[error("size mismatch: expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("series too short: need at least {need} samples, got {got}")]
    TooShort { need: usize, got: usize },

    #[error("non-degeneracy violated at node {node} (t = {time:e} s): 1 + 2kp = {value:.6} < {floor}")]
    Degenerate {
        node: usize,
        time: f64,
        value: f64,
        floor: f64,
    },

    #[error("Newmark corrector did not converge at t = {time:e} s after {iterations} iterations (relative change {change:e})")]
    CorrectorDiverged {
        time: f64,
        iterations: usize,
        change: f64,
    },

    #[error("non-finite value at node {node} (t = {time:e} s)")]
    NonFinite { node: usize, time: f64 },

    #[error("bubble at node {node} failed at t = {time:e} s: {reason}")]
    BubbleFailure {
        node: usize,
        time: f64,
        reason: String,
    },

    #[error("more than {limit} micro-steps in one macro step at t = {time:e} s; reduce the wave time step")]
    MicroStepOverflow { limit: u64, time: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
