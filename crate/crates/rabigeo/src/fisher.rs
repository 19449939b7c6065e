//! Fisher information of the success/failure probability vector.
//!
//! Two independent evaluation routes are kept side by side:
//! [`fisher_generic`] assembles F = ṗ₀²/p₀ + ṗ₁²/p₁ from the analytic
//! probability derivatives, while [`fisher_closed`] evaluates the per-scheme
//! closed forms. Their agreement (and agreement with finite differences of
//! the probabilities) is asserted by the test suites.

use crate::schemes::{sigma_unchecked, Detuning, DrivingScheme};

/// A sampled Fisher value (units 1/time²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherPoint {
    pub theta: f64,
    pub value: f64,
}

/// Analytic dΣ/dθ = √(1+β₀²) · ω_H(θ)/ħ.
pub fn dsigma_dtheta(scheme: &DrivingScheme, det: &Detuning, theta: f64) -> f64 {
    det.rabi_rate(scheme.gamma_rate()) * scheme.envelope(theta)
}

/// F(θ) = ṗ₀²/p₀ + ṗ₁²/p₁ with ṗ from the analytic chain rule.
///
/// At the isolated points where p₀ ∈ {0, 1} the ratio is 0/0; the continuous
/// limit (4A cos²Σ Σ'² resp. 4 sin²Σ Σ'², the latter only reachable at A = 1)
/// is returned there.
pub fn fisher_generic(scheme: &DrivingScheme, det: &Detuning, theta: f64) -> f64 {
    let a = det.amp_factor();
    let sig = sigma_unchecked(scheme, det, theta);
    let sp = dsigma_dtheta(scheme, det, theta);
    let (s, c) = sig.sin_cos();
    let p0 = a * (s * s);
    let p1 = 1.0 - p0;
    let pdot = a * (2.0 * s * c) * sp;
    let term0 = if p0 > 0.0 { pdot * pdot / p0 } else { 4.0 * a * c * c * sp * sp };
    let term1 = if p1 > 0.0 { pdot * pdot / p1 } else { 4.0 * s * s * sp * sp };
    term0 + term1
}

/// The scheme's off-resonance factor (1 + cos 2Σ)/(2 − A(1 − cos 2Σ)), equal
/// to cos²Σ/(1 − A sin²Σ) and bounded by 1. The oscillatory numerator keeps
/// its 2cos²Σ arrangement. Shared by the closed Fisher form and the
/// closed-form speeds so that v = ½√F·θ' holds to the bit.
pub(crate) fn offres_bracket(scheme: &DrivingScheme, det: &Detuning, theta: f64) -> f64 {
    let a = det.amp_factor();
    let sig = crate::schemes::sigma_unchecked(scheme, det, theta);
    let c2 = (2.0 * sig).cos();
    let numerator = match scheme.kind() {
        crate::schemes::SchemeKind::Oscillatory => {
            let c = sig.cos();
            2.0 * c * c
        }
        _ => 1.0 + c2,
    };
    numerator / (2.0 - a * (1.0 - c2))
}

/// Scheme-specific closed form of the Fisher information:
/// F = 4 A B² envelope² × bracket with A B² = (Γ/ħ)² used exactly.
///
/// On resonance (A = 1) the expression collapses exactly to
/// [`fisher_on_resonance`], which also removes the 0/0 at sin²Σ = 1.
/// F is assembled as the square of 2(Γ/ħ)·envelope·√bracket so its square
/// root reproduces the closed-form speeds without extra rounding.
pub fn fisher_closed(scheme: &DrivingScheme, det: &Detuning, theta: f64) -> f64 {
    if det.amp_factor() == 1.0 {
        return fisher_on_resonance(scheme, theta);
    }
    let scale = 2.0 * (scheme.gamma_rate() * scheme.envelope(theta));
    let root = scale * offres_bracket(scheme, det, theta).sqrt();
    root * root
}

/// β₀ = 0 reduction: F(θ) = 4 B² envelope²(θ) with B = Γ/ħ.
pub fn fisher_on_resonance(scheme: &DrivingScheme, theta: f64) -> f64 {
    let root = 2.0 * (scheme.gamma_rate() * scheme.envelope(theta));
    root * root
}

/// Closed-form Fisher values on a θ grid.
pub fn fisher_closed_profile(scheme: &DrivingScheme, det: &Detuning, thetas: &[f64]) -> Vec<FisherPoint> {
    thetas
        .iter()
        .map(|&theta| FisherPoint { theta, value: fisher_closed(scheme, det, theta) })
        .collect()
}
