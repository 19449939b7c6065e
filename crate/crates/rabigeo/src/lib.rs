//! # rabigeo
//!
//! Information geometry of off-resonant two-level quantum driving.
//!
//! Four exactly solvable drive envelopes (constant, oscillatory, power-law
//! decay, exponential decay) share one success-probability law
//! p₀(θ) = A sin²Σ(θ) with A = 1/(1+β₀²) and Σ = √(1+β₀²) × pulse area,
//! where β₀ is the constant detuning from resonance. This crate computes,
//! for each scheme and detuning:
//!
//! - transition probabilities, cross-validated by direct integration of the
//!   amplitude equations in two frames ([`oracle`]);
//! - the Fisher information of the probability vector, closed-form and
//!   generic ([`fisher`]);
//! - geodesics of the Fisher metric with constant-speed and arc-length
//!   diagnostics ([`geodesic`]);
//! - initial geodesic speeds, robustness coefficients, and the (β₀, θ₀)
//!   dominance regions where slower envelopes beat constant driving on both
//!   speed and robustness ([`robustness`]);
//! - reference resonance curves and field conversions ([`resonance`]).
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example probabilities        # p0(θ) across detunings
//! cargo run --release --example fisher_information   # closed vs generic route
//! cargo run --release --example geodesic_paths       # integrated θ(ξ) per scheme
//! cargo run --release --example speeds_and_robustness
//! cargo run --release --example dominance_regions    # region scan summary
//! cargo run --release --example schrodinger_oracle   # numeric cross-validation
//! cargo run --release --example resonance_curves
//! ```
//!
//! The `rabigeo` binary reproduces the figure data as CSV and runs the
//! validation suites; see the README or `rabigeo --help`.
//!
//! All types are plain values without interior mutability: evaluations are
//! pure, `Send + Sync`, and safe to parallelize (the region scanner does).

pub mod cli;
pub mod defaults;
pub mod error;
pub mod fisher;
pub mod geodesic;
pub mod grid;
pub mod ode;
pub mod oracle;
pub mod quad;
pub mod resonance;
pub mod robustness;
pub mod schemes;

pub use error::{Error, Result};
pub use schemes::{Detuning, DrivingScheme, SchemeKind};
