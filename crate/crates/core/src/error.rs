use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ladder too fine: smallest epsilon {eps:.6e} is below the floor {floor:.6e} (= 10 dt)")]
    LadderTooFine { eps: f64, floor: f64 },

    #[error(
        "kernel truncation inadmissible: t = {t:.6e} below t_min = {t_min:.6e} for {modes} modes"
    )]
    TruncationInadmissible { t: f64, t_min: f64, modes: usize },

    #[error("mode {mode} forward integral did not converge (final sup-difference {diff:.3e} vs tolerance {tol:.3e})")]
    ModeDivergence { mode: usize, diff: f64, tol: f64 },

    #[error("field blow-up: sup-norm {sup:.3e} exceeded the guard {guard:.3e} at time step {step}")]
    BlowUp { sup: f64, guard: f64, step: usize },

    #[error("substitution parameter out of range: |z| = {value:.3e} exceeds {bound:.3e}")]
    ParameterOutOfRange { value: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
