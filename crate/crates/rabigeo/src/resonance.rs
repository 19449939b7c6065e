//! Reference resonance computations: the driven damped oscillator curve, the
//! two-level Lorentzian, the static detuning parameter, and the linear maps
//! between reduced field rates and magnetic-field components.

use crate::error::{ensure_finite, Error, Result};

/// Electron mass, MKSA (kg).
pub const ELECTRON_MASS_MKSA: f64 = 9.11e-31;
/// Elementary charge magnitude, MKSA (C).
pub const ELEMENTARY_CHARGE_MKSA: f64 = 1.60e-19;
/// Speed of light, MKSA (m/s).
pub const SPEED_OF_LIGHT_MKSA: f64 = 3.0e8;
/// Reduced Planck constant, MKSA (J s).
pub const HBAR_MKSA: f64 = 1.05e-34;
/// Bohr magneton, CGS (erg/G).
pub const BOHR_MAGNETON_CGS: f64 = 9.27e-21;

/// Mass-spring system m x'' + λ x' + k x = f₀ cos(γ t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOscillator {
    m: f64,
    damping: f64,
    k: f64,
    f0: f64,
}

impl ClassicalOscillator {
    pub fn new(m: f64, damping: f64, k: f64, f0: f64) -> Result<Self> {
        ensure_finite("m", m)?;
        ensure_finite("damping", damping)?;
        ensure_finite("k", k)?;
        ensure_finite("f0", f0)?;
        if m <= 0.0 || k <= 0.0 {
            return Err(Error::invalid(format!("m and k must be positive, got m={m}, k={k}")));
        }
        if damping < 0.0 {
            return Err(Error::invalid(format!("damping must be nonnegative, got {damping}")));
        }
        Ok(ClassicalOscillator { m, damping, k, f0 })
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn stiffness(&self) -> f64 {
        self.k
    }

    pub fn forcing_amplitude(&self) -> f64 {
        self.f0
    }

    /// Steady-state amplitude per unit forcing: f₀ × the resonance curve.
    pub fn steady_state_amplitude(&self, gamma_freq: f64) -> Result<f64> {
        Ok(self.f0 * classical_resonance_curve(self, gamma_freq)?)
    }
}

/// C(γ) = [(k − mγ²)² + λ²γ²]^{−1/2}.
///
/// Returns +∞ (the divergence marker) for the undamped oscillator driven
/// exactly at its natural frequency.
pub fn classical_resonance_curve(osc: &ClassicalOscillator, gamma_freq: f64) -> Result<f64> {
    ensure_finite("gamma_freq", gamma_freq)?;
    if gamma_freq <= 0.0 {
        return Err(Error::invalid(format!("gamma_freq must be positive, got {gamma_freq}")));
    }
    let elastic = osc.k - osc.m * gamma_freq * gamma_freq;
    let dissipative = osc.damping * gamma_freq;
    let denom_sq = elastic * elastic + dissipative * dissipative;
    if denom_sq == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(denom_sq.sqrt().recip())
}

/// γ* = √(k/m − λ²/(2m²)), the maximizer of the resonance curve.
pub fn classical_resonant_frequency(osc: &ClassicalOscillator) -> Result<f64> {
    let radicand = osc.k / osc.m - osc.damping * osc.damping / (2.0 * osc.m * osc.m);
    if radicand <= 0.0 {
        return Err(Error::NoResonance { radicand });
    }
    Ok(radicand.sqrt())
}

/// Static two-level system E₁|1⟩⟨1| + E₂|2⟩⟨2| driven through a sinusoidal
/// coupling of strength γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelStatic {
    e1: f64,
    e2: f64,
    coupling: f64,
    hbar: f64,
}

impl TwoLevelStatic {
    pub fn new(e1: f64, e2: f64, coupling: f64, hbar: f64) -> Result<Self> {
        ensure_finite("e1", e1)?;
        ensure_finite("e2", e2)?;
        ensure_finite("coupling", coupling)?;
        ensure_finite("hbar", hbar)?;
        if e2 <= e1 {
            return Err(Error::invalid(format!("need e2 > e1, got e1={e1}, e2={e2}")));
        }
        if coupling <= 0.0 || hbar <= 0.0 {
            return Err(Error::invalid("coupling and hbar must be positive".to_string()));
        }
        Ok(TwoLevelStatic { e1, e2, coupling, hbar })
    }

    pub fn level_splitting(&self) -> f64 {
        self.e2 - self.e1
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Q(ω) = [1 + (ħ/γ)²(ω − ω₂₁)²/4]^{−1}, a normalized Lorentzian.
pub fn quantum_resonance_curve(sys: &TwoLevelStatic, omega: f64) -> Result<f64> {
    ensure_finite("omega", omega)?;
    let detune = omega - quantum_resonant_frequency(sys);
    let scaled = sys.hbar / sys.coupling * detune;
    Ok(1.0 / (1.0 + scaled * scaled / 4.0))
}

/// ω* = ω₂₁ = (E₂ − E₁)/ħ.
pub fn quantum_resonant_frequency(sys: &TwoLevelStatic) -> f64 {
    (sys.e2 - sys.e1) / sys.hbar
}

/// Static detuning β₀ = (mc/(|e|B⊥)) (ω − |e|B∥/(mc)) for a spin in a
/// rotating transverse field.
pub fn static_beta0(m: f64, c: f64, e_abs: f64, b_perp: f64, b_par: f64, omega: f64) -> Result<f64> {
    ensure_finite("m", m)?;
    ensure_finite("c", c)?;
    ensure_finite("e_abs", e_abs)?;
    ensure_finite("b_perp", b_perp)?;
    ensure_finite("b_par", b_par)?;
    ensure_finite("omega", omega)?;
    if b_perp == 0.0 {
        return Err(Error::DivisionByZero("b_perp in static_beta0"));
    }
    if b_perp < 0.0 || e_abs <= 0.0 || m <= 0.0 || c <= 0.0 {
        return Err(Error::invalid("m, c, e_abs must be positive and b_perp nonnegative".to_string()));
    }
    let larmor = e_abs * b_par / (m * c);
    Ok(m * c / (e_abs * b_perp) * (omega - larmor))
}

/// Magnetic-field components from the reduced field rates:
/// B_i = −(2mc/(eħ)) {ω_x, ω_y, Ω}. `e` is signed.
pub fn field_components(
    omega_x: f64,
    omega_y: f64,
    omega_cap: f64,
    m: f64,
    c: f64,
    e: f64,
    hbar: f64,
) -> (f64, f64, f64) {
    let factor = -2.0 * m * c / (e * hbar);
    (factor * omega_x, factor * omega_y, factor * omega_cap)
}

/// Inverse of [`field_components`]: ω_i = −(eħ/(2mc)) B_i.
pub fn field_rates_from_components(
    b_x: f64,
    b_y: f64,
    b_z: f64,
    m: f64,
    c: f64,
    e: f64,
    hbar: f64,
) -> (f64, f64, f64) {
    let factor = -e * hbar / (2.0 * m * c);
    (factor * b_x, factor * b_y, factor * b_z)
}

/// Intensity forms: B⊥ = (2mc/(|e|ħ)) ω_H and B∥ = (2mc/(|e|ħ)) Ω_H.
pub fn field_intensities(omega_h: f64, omega_cap_h: f64, m: f64, c: f64, e_abs: f64, hbar: f64) -> (f64, f64) {
    let factor = 2.0 * m * c / (e_abs * hbar);
    (factor * omega_h, factor * omega_cap_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;

    #[test]
    fn undamped_resonance_diverges() {
        let osc = ClassicalOscillator::new(2.0, 0.0, 8.0, 1.0).unwrap();
        let natural = (8.0f64 / 2.0).sqrt();
        assert!(classical_resonance_curve(&osc, natural).unwrap().is_infinite());
        assert!(classical_resonance_curve(&osc, natural + 0.1).unwrap().is_finite());
    }

    #[test]
    fn curve_decays_at_high_frequency() {
        let osc = ClassicalOscillator::new(1.0, 0.5, 1.0, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for &g in &[5.0, 10.0, 20.0, 40.0] {
            let v = classical_resonance_curve(&osc, g).unwrap();
            assert!(v < last && v > 0.0);
            last = v;
        }
    }

    #[test]
    fn resonant_frequency_values() {
        let undamped = ClassicalOscillator::new(1.0, 0.0, 4.0, 1.0).unwrap();
        assert_eq!(classical_resonant_frequency(&undamped).unwrap(), 2.0);
        let osc = ClassicalOscillator::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((classical_resonant_frequency(&osc).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        // Overdamped: k/m - damping^2/(2m^2) <= 0.
        let over = ClassicalOscillator::new(1.0, 2.0, 1.0, 1.0).unwrap();
        assert!(matches!(classical_resonant_frequency(&over), Err(Error::NoResonance { .. })));
    }

    #[test]
    fn argmax_matches_resonant_frequency() {
        let osc = ClassicalOscillator::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let gamma_star = classical_resonant_frequency(&osc).unwrap();
        let sweep = linspace(1e-3, 3.0, 10_000);
        let step = sweep[1] - sweep[0];
        let best = sweep
            .iter()
            .map(|&g| (g, classical_resonance_curve(&osc, g).unwrap()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0;
        assert!((best - gamma_star).abs() <= step, "argmax {best} vs {gamma_star}");
    }

    #[test]
    fn lorentzian_shape() {
        let sys = TwoLevelStatic::new(0.0, 1.0, 0.25, 1.0).unwrap();
        let w21 = quantum_resonant_frequency(&sys);
        assert_eq!(w21, 1.0);
        assert_eq!(quantum_resonance_curve(&sys, w21).unwrap(), 1.0);
        // Half maximum at |omega - omega21| = 2 gamma / hbar.
        let half_width = 2.0 * sys.coupling() / sys.hbar();
        for &w in &[w21 - half_width, w21 + half_width] {
            let q = quantum_resonance_curve(&sys, w).unwrap();
            assert!((q - 0.5).abs() < 1e-10, "got {q}");
        }
        // Even about the peak, vanishing in the wings.
        for &d in &[0.3, 1.0, 4.0] {
            let lo = quantum_resonance_curve(&sys, w21 - d).unwrap();
            let hi = quantum_resonance_curve(&sys, w21 + d).unwrap();
            assert!((lo - hi).abs() < 1e-15);
        }
        assert!(quantum_resonance_curve(&sys, 1e6).unwrap() < 1e-10);
    }

    #[test]
    fn lorentzian_argmax() {
        let sys = TwoLevelStatic::new(-0.3, 1.2, 0.4, 1.0).unwrap();
        let w21 = quantum_resonant_frequency(&sys);
        let sweep = linspace(w21 - 5.0, w21 + 5.0, 10_001);
        let best = sweep
            .iter()
            .map(|&w| (w, quantum_resonance_curve(&sys, w).unwrap()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0;
        assert!((best - w21).abs() <= sweep[1] - sweep[0]);
    }

    #[test]
    fn larmor_correspondence() {
        // With omega21 -> |e| B_par / (m c) the resonance sits at the Larmor rate.
        let (m, c, e_abs) = (2.0, 3.0, 0.5);
        let (b_perp, b_par) = (1.5, 4.0);
        let larmor = e_abs * b_par / (m * c);
        assert_eq!(static_beta0(m, c, e_abs, b_perp, b_par, larmor).unwrap(), 0.0);
    }

    #[test]
    fn static_beta0_structure() {
        let (m, c, e_abs) = (1.0, 1.0, 1.0);
        // B_par = 0 reduces to m c omega / (|e| B_perp).
        assert_eq!(static_beta0(m, c, e_abs, 2.0, 0.0, 3.0).unwrap(), 1.5);
        // Doubling B_perp halves beta0 at fixed detuning.
        let b1 = static_beta0(m, c, e_abs, 1.0, 0.5, 2.0).unwrap();
        let b2 = static_beta0(m, c, e_abs, 2.0, 0.5, 2.0).unwrap();
        assert!((b1 - 2.0 * b2).abs() < 1e-15);
        // Affine in omega with slope mc/(|e| B_perp).
        let slope = (static_beta0(m, c, e_abs, 4.0, 0.5, 3.0).unwrap()
            - static_beta0(m, c, e_abs, 4.0, 0.5, 1.0).unwrap())
            / 2.0;
        assert!((slope - 0.25).abs() < 1e-15);
        assert!(static_beta0(m, c, e_abs, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn field_conversion_roundtrip() {
        let (m, c, e, hbar) = (ELECTRON_MASS_MKSA, SPEED_OF_LIGHT_MKSA, -ELEMENTARY_CHARGE_MKSA, HBAR_MKSA);
        assert_eq!(field_components(0.0, 0.0, 0.0, m, c, e, hbar), (0.0, 0.0, 0.0));
        for &(wx, wy, wz) in &[(1.0e-20, -2.0e-20, 3.0e-20), (0.5e-22, 0.0, -1.0e-21)] {
            let (bx, by, bz) = field_components(wx, wy, wz, m, c, e, hbar);
            let (rx, ry, rz) = field_rates_from_components(bx, by, bz, m, c, e, hbar);
            for (orig, round) in [(wx, rx), (wy, ry), (wz, rz)] {
                assert!((orig - round).abs() <= 2.0 * f64::EPSILON * orig.abs(), "{orig} vs {round}");
            }
        }
    }

    #[test]
    fn intensity_relation() {
        let (m, c, e_abs, hbar) = (2.0, 3.0, 0.5, 0.25);
        for &(wx, wy) in &[(0.3f64, 0.4), (1.0, 0.0), (0.6, -0.8)] {
            let omega_h = (wx * wx + wy * wy).sqrt();
            let (b_perp, _) = field_intensities(omega_h, 0.0, m, c, e_abs, hbar);
            let (bx, by, _) = field_components(wx, wy, 0.0, m, c, -e_abs, hbar);
            let measured = (bx * bx + by * by).sqrt();
            assert!((b_perp - measured).abs() < 1e-12 * b_perp.abs().max(1.0));
        }
    }

    #[test]
    fn constructor_validation() {
        assert!(ClassicalOscillator::new(0.0, 0.1, 1.0, 1.0).is_err());
        assert!(ClassicalOscillator::new(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(TwoLevelStatic::new(1.0, 1.0, 0.5, 1.0).is_err());
        assert!(TwoLevelStatic::new(0.0, 1.0, 0.0, 1.0).is_err());
        let osc = ClassicalOscillator::new(1.0, 0.5, 1.0, 2.0).unwrap();
        assert!(classical_resonance_curve(&osc, 0.0).is_err());
        assert!(classical_resonance_curve(&osc, -1.0).is_err());
        assert!((osc.steady_state_amplitude(1.0).unwrap()
            - 2.0 * classical_resonance_curve(&osc, 1.0).unwrap())
        .abs()
            < 1e-15);
    }
}
