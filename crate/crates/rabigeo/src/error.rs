//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, evaluation, and integration routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented precondition (non-finite, wrong sign, out of range).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A denominator that must be nonzero was zero.
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    /// Overdamped oscillator: the resonance curve has no interior maximum.
    #[error("no underdamped resonance: k/m - damping^2/(2 m^2) = {radicand} <= 0")]
    NoResonance { radicand: f64 },

    /// The geodesic right-hand side was evaluated within the guard band of a tan pole.
    #[error("tan-pole singularity near theta = {theta} (tan argument {argument})")]
    TanPole { theta: f64, argument: f64 },

    /// The adaptive step size fell below the hard floor.
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    /// The integrator exceeded its step budget.
    #[error("step limit {max_steps} exceeded at t = {t}")]
    MaxSteps { t: f64, max_steps: usize },

    /// Amplitude norm drifted beyond the accepted bound; the evolution is untrustworthy.
    #[error("unitarity defect {defect:e} exceeds limit {limit:e}")]
    UnitarityLoss { defect: f64, limit: f64 },

    /// Adaptive quadrature hit its recursion limit before meeting the tolerance.
    #[error("quadrature did not converge on [{a}, {b}]")]
    QuadratureDepth { a: f64, b: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Fails with [`Error::InvalidArgument`] unless `x` is finite.
pub fn ensure_finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {x}")))
    }
}
