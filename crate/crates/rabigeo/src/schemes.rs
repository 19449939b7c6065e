//! The four exactly solvable driving schemes and the off-resonance detuning.
//!
//! A scheme is a transverse-field envelope shape plus its rate parameters:
//! the reduced intensity `gamma_rate` = Γ/ħ (units 1/time) and, for the
//! non-constant shapes, the envelope rate λ (units 1/time). All probability
//! formulas reduce to
//!
//! ```text
//! p0(θ) = A sin²[Σ(θ)],   A = 1/(1+β₀²),   Σ(θ) = √(1+β₀²) · ∫₀^θ ω_H(t)/ħ dt
//! ```
//!
//! where β₀ is the constant detuning parameter. Everything here is a pure
//! function of its inputs; values are `Copy` and safe to share across threads.

use crate::error::{ensure_finite, Error, Result};

/// Envelope shape selector for [`DrivingScheme`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Constant,
    Oscillatory,
    PowerLawDecay,
    ExponentialDecay,
}

impl SchemeKind {
    /// All four kinds in their conventional order.
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::Constant,
        SchemeKind::Oscillatory,
        SchemeKind::PowerLawDecay,
        SchemeKind::ExponentialDecay,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Constant => "constant",
            SchemeKind::Oscillatory => "oscillatory",
            SchemeKind::PowerLawDecay => "powerlaw",
            SchemeKind::ExponentialDecay => "exponential",
        }
    }

    /// Parse a kind from a user-facing name (several aliases accepted).
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "constant" | "const" => Ok(SchemeKind::Constant),
            "oscillatory" | "osc" | "cosine" => Ok(SchemeKind::Oscillatory),
            "powerlaw" | "power-law" | "power-law-decay" | "pld" => Ok(SchemeKind::PowerLawDecay),
            "exponential" | "exp" | "exponential-decay" => Ok(SchemeKind::ExponentialDecay),
            other => Err(Error::invalid(format!(
                "unknown scheme '{other}' (expected constant|oscillatory|powerlaw|exponential)"
            ))),
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the four drive envelopes with its rate parameters.
///
/// `Constant` carries no λ; the other kinds require λ > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DrivingScheme {
    /// ω_H(t) = Γ
    Constant { gamma_rate: f64 },
    /// ω_H(t) = Γ cos(λt); positive envelope for t ≤ (π/2)/λ
    Oscillatory { gamma_rate: f64, lambda: f64 },
    /// ω_H(t) = Γ/(1+λt)²
    PowerLawDecay { gamma_rate: f64, lambda: f64 },
    /// ω_H(t) = Γ e^{−λt}
    ExponentialDecay { gamma_rate: f64, lambda: f64 },
}

impl DrivingScheme {
    pub fn constant(gamma_rate: f64) -> Result<Self> {
        check_rate("gamma_rate", gamma_rate)?;
        Ok(DrivingScheme::Constant { gamma_rate })
    }

    pub fn oscillatory(gamma_rate: f64, lambda: f64) -> Result<Self> {
        check_rate("gamma_rate", gamma_rate)?;
        check_rate("lambda", lambda)?;
        Ok(DrivingScheme::Oscillatory { gamma_rate, lambda })
    }

    pub fn power_law_decay(gamma_rate: f64, lambda: f64) -> Result<Self> {
        check_rate("gamma_rate", gamma_rate)?;
        check_rate("lambda", lambda)?;
        Ok(DrivingScheme::PowerLawDecay { gamma_rate, lambda })
    }

    pub fn exponential_decay(gamma_rate: f64, lambda: f64) -> Result<Self> {
        check_rate("gamma_rate", gamma_rate)?;
        check_rate("lambda", lambda)?;
        Ok(DrivingScheme::ExponentialDecay { gamma_rate, lambda })
    }

    /// Build from a kind plus shared rate parameters (λ ignored by `Constant`).
    pub fn new(kind: SchemeKind, gamma_rate: f64, lambda: f64) -> Result<Self> {
        match kind {
            SchemeKind::Constant => Self::constant(gamma_rate),
            SchemeKind::Oscillatory => Self::oscillatory(gamma_rate, lambda),
            SchemeKind::PowerLawDecay => Self::power_law_decay(gamma_rate, lambda),
            SchemeKind::ExponentialDecay => Self::exponential_decay(gamma_rate, lambda),
        }
    }

    pub fn kind(&self) -> SchemeKind {
        match self {
            DrivingScheme::Constant { .. } => SchemeKind::Constant,
            DrivingScheme::Oscillatory { .. } => SchemeKind::Oscillatory,
            DrivingScheme::PowerLawDecay { .. } => SchemeKind::PowerLawDecay,
            DrivingScheme::ExponentialDecay { .. } => SchemeKind::ExponentialDecay,
        }
    }

    /// Γ/ħ in units of 1/time.
    pub fn gamma_rate(&self) -> f64 {
        match *self {
            DrivingScheme::Constant { gamma_rate }
            | DrivingScheme::Oscillatory { gamma_rate, .. }
            | DrivingScheme::PowerLawDecay { gamma_rate, .. }
            | DrivingScheme::ExponentialDecay { gamma_rate, .. } => gamma_rate,
        }
    }

    /// Envelope rate λ; `None` for the constant scheme.
    pub fn lambda(&self) -> Option<f64> {
        match *self {
            DrivingScheme::Constant { .. } => None,
            DrivingScheme::Oscillatory { lambda, .. }
            | DrivingScheme::PowerLawDecay { lambda, .. }
            | DrivingScheme::ExponentialDecay { lambda, .. } => Some(lambda),
        }
    }

    /// Dimensionless envelope factor ω_H(t)/Γ.
    pub fn envelope(&self, t: f64) -> f64 {
        match *self {
            DrivingScheme::Constant { .. } => 1.0,
            DrivingScheme::Oscillatory { lambda, .. } => (lambda * t).cos(),
            DrivingScheme::PowerLawDecay { lambda, .. } => {
                let d = 1.0 + lambda * t;
                1.0 / (d * d)
            }
            DrivingScheme::ExponentialDecay { lambda, .. } => (-lambda * t).exp(),
        }
    }

    /// End of the guaranteed positive-envelope domain: (π/2)/λ for the
    /// oscillatory scheme, unbounded otherwise.
    pub fn domain_end(&self) -> Option<f64> {
        match *self {
            DrivingScheme::Oscillatory { lambda, .. } => Some(std::f64::consts::FRAC_PI_2 / lambda),
            _ => None,
        }
    }

    /// True when evaluating at `t` leaves the positive-envelope domain.
    /// A warning flag, never an error: the formulas extend smoothly past it.
    pub fn domain_warning(&self, t: f64) -> bool {
        self.domain_end().is_some_and(|end| t > end)
    }
}

fn check_rate(name: &str, x: f64) -> Result<()> {
    ensure_finite(name, x)?;
    if x <= 0.0 {
        return Err(Error::invalid(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// The constant off-resonance parameter β₀ with its derived factors
/// A = 1/(1+β₀²) and √(1+β₀²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detuning {
    beta0: f64,
    one_plus_beta0_sq: f64,
    amp_factor: f64,
    rate_factor: f64,
}

impl Detuning {
    /// Requires a finite β₀ ≥ 0.
    pub fn new(beta0: f64) -> Result<Self> {
        ensure_finite("beta0", beta0)?;
        if beta0 < 0.0 {
            return Err(Error::invalid(format!("beta0 must be nonnegative, got {beta0}")));
        }
        let one_plus_beta0_sq = 1.0 + beta0 * beta0;
        Ok(Detuning {
            beta0,
            one_plus_beta0_sq,
            amp_factor: 1.0 / one_plus_beta0_sq,
            rate_factor: one_plus_beta0_sq.sqrt(),
        })
    }

    /// β₀ = 0: the resonant limit, with both derived factors exactly 1.
    pub fn on_resonance() -> Self {
        Detuning { beta0: 0.0, one_plus_beta0_sq: 1.0, amp_factor: 1.0, rate_factor: 1.0 }
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    /// A = 1/(1+β₀²), the transfer-amplitude damping factor in (0, 1].
    pub fn amp_factor(&self) -> f64 {
        self.amp_factor
    }

    /// √(1+β₀²), the dimensionless rate multiplier.
    pub fn rate_factor(&self) -> f64 {
        self.rate_factor
    }

    /// Exactly on resonance (constructed with β₀ = 0).
    pub fn is_resonant(&self) -> bool {
        self.beta0 == 0.0
    }

    /// The effective rate B = √(1+β₀²) · Γ/ħ for a given intensity.
    pub fn rabi_rate(&self, gamma_rate: f64) -> f64 {
        self.rate_factor * gamma_rate
    }
}

/// A(β₀) = 1/(1+β₀²).
pub fn amplitude_factor(beta0: f64) -> Result<f64> {
    Ok(Detuning::new(beta0)?.amp_factor())
}

/// B = √(1+β₀²) · Γ/ħ, units 1/time.
pub fn rabi_rate(beta0: f64, gamma_rate: f64) -> Result<f64> {
    check_rate("gamma_rate", gamma_rate)?;
    Ok(Detuning::new(beta0)?.rabi_rate(gamma_rate))
}

/// The detuning parameter β₀ = (ħ/2ω_H)(φ̇_ω + 2Ω/ħ) built from raw fields.
///
/// `phi_dot` is the transverse-phase rate, `omega_cap` the longitudinal field
/// Ω (energy), `omega_h` the transverse intensity (energy), `hbar` the reduced
/// Planck constant in matching units.
pub fn detuning_beta0(phi_dot: f64, omega_cap: f64, omega_h: f64, hbar: f64) -> Result<f64> {
    ensure_finite("phi_dot", phi_dot)?;
    ensure_finite("omega_cap", omega_cap)?;
    ensure_finite("omega_h", omega_h)?;
    ensure_finite("hbar", hbar)?;
    if omega_h == 0.0 {
        return Err(Error::DivisionByZero("omega_h in detuning_beta0"));
    }
    if hbar <= 0.0 {
        return Err(Error::invalid(format!("hbar must be positive, got {hbar}")));
    }
    Ok(hbar / (2.0 * omega_h) * (phi_dot + 2.0 * omega_cap / hbar))
}

/// Transverse intensity ω_H(t) in energy units for an explicit Γ.
pub fn omega_h(scheme: &DrivingScheme, t: f64, gamma: f64) -> Result<f64> {
    ensure_finite("t", t)?;
    ensure_finite("gamma", gamma)?;
    if t < 0.0 {
        return Err(Error::invalid(format!("t must be nonnegative, got {t}")));
    }
    Ok(gamma * scheme.envelope(t))
}

/// Pulse area ∫₀^θ ω_H(t)/ħ dt in closed form (dimensionless).
pub fn pulse_area(scheme: &DrivingScheme, theta: f64) -> Result<f64> {
    ensure_finite("theta", theta)?;
    if theta < 0.0 {
        return Err(Error::invalid(format!("theta must be nonnegative, got {theta}")));
    }
    Ok(pulse_area_unchecked(scheme, theta))
}

/// Pulse area without the domain check; total over all finite θ.
pub(crate) fn pulse_area_unchecked(scheme: &DrivingScheme, theta: f64) -> f64 {
    let g = scheme.gamma_rate();
    match *scheme {
        DrivingScheme::Constant { .. } => g * theta,
        DrivingScheme::Oscillatory { lambda, .. } => g / lambda * (lambda * theta).sin(),
        DrivingScheme::PowerLawDecay { lambda, .. } => g / lambda * (1.0 - 1.0 / (1.0 + lambda * theta)),
        DrivingScheme::ExponentialDecay { lambda, .. } => g / lambda * (1.0 - (-lambda * theta).exp()),
    }
}

/// Σ(θ) = √(1+β₀²) × pulse area, evaluated from its own closed form.
pub fn sigma(scheme: &DrivingScheme, det: &Detuning, theta: f64) -> Result<f64> {
    ensure_finite("theta", theta)?;
    if theta < 0.0 {
        return Err(Error::invalid(format!("theta must be nonnegative, got {theta}")));
    }
    Ok(sigma_unchecked(scheme, det, theta))
}

/// Σ(θ) without the domain check; total over all finite θ.
pub(crate) fn sigma_unchecked(scheme: &DrivingScheme, det: &Detuning, theta: f64) -> f64 {
    let b = det.rabi_rate(scheme.gamma_rate());
    match *scheme {
        DrivingScheme::Constant { .. } => b * theta,
        DrivingScheme::Oscillatory { lambda, .. } => b / lambda * (lambda * theta).sin(),
        DrivingScheme::PowerLawDecay { lambda, .. } => b / lambda * (1.0 - 1.0 / (1.0 + lambda * theta)),
        DrivingScheme::ExponentialDecay { lambda, .. } => b / lambda * (1.0 - (-lambda * theta).exp()),
    }
}

/// Success probability p₀(θ) = A sin²[Σ(θ)] ∈ [0, A].
pub fn success_probability(scheme: &DrivingScheme, det: &Detuning, theta: f64) -> Result<f64> {
    let s = sigma(scheme, det, theta)?.sin();
    Ok(det.amp_factor() * s * s)
}

/// Failure probability p₁(θ) = 1 − p₀(θ).
pub fn failure_probability(scheme: &DrivingScheme, det: &Detuning, theta: f64) -> Result<f64> {
    Ok(1.0 - success_probability(scheme, det, theta)?)
}
