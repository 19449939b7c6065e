//! Frozen default parameter values shared by the CLI, figures, and tests.
//!
//! These are the standard figure settings; the defaults test pins each
//! constant against its defining expression so accidental edits fail loudly.

/// Γ/ħ.
pub const GAMMA_RATE: f64 = 1.0;
/// Envelope rate λ = 2/π.
pub const LAMBDA: f64 = 2.0 / std::f64::consts::PI;
/// Initial position θ₀.
pub const THETA0: f64 = 0.0;
/// Initial velocity θ'₀.
pub const THETA_DOT0: f64 = 1.0;
/// Detuning list for the probability figure.
pub const BETA0_LIST: [f64; 4] = [0.0, 0.25, 0.5, 1.0];
/// Off-resonance panel detuning for the geodesic and speed figures.
pub const BETA0_OFF: f64 = 0.5;
/// Integrator tolerance (absolute = relative).
pub const TOL: f64 = 1e-10;
/// ξ-span for geodesic figures.
pub const XI_SPAN: (f64, f64) = (0.0, 3.0);
/// Fidelity floor of the dominance-region scan: A(β₀) ≥ 25/26, i.e. β₀ ≤ 0.2.
pub const P_MIN: f64 = 25.0 / 26.0;
/// θ₀ range of the dominance-region scan.
pub const THETA0_RANGE: (f64, f64) = (0.0, 2.0);
/// Dominance-region grid resolution per axis.
pub const REGION_RESOLUTION: usize = 200;
/// Lab-frame carrier for the numeric oracle (negative by convention).
pub const OMEGA0: f64 = crate::oracle::DEFAULT_OMEGA0;

/// Per-figure sample counts.
pub const FIG1_POINTS: usize = 1000;
pub const FIG2_POINTS: usize = 301;
pub const FIG3_POINTS: usize = 201;
pub const FIG4_POINTS: usize = 201;

/// θ ranges of the probability and speed figures.
pub const FIG1_THETA_MAX: f64 = 4.0 * std::f64::consts::PI;
pub const FIG3_THETA0_MAX: f64 = 2.0 * std::f64::consts::PI;
