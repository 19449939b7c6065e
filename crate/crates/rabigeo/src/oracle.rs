//! Independent verification of the closed-form probabilities by direct
//! numerical integration of the amplitude equations
//!
//! ```text
//! i ħ α' = Ω α − ω β*,   i ħ β' = ω α* + Ω β,   α(0) = 1, β(0) = 0
//! ```
//!
//! in the rotating frame (real transverse field, longitudinal β₀ ω_H) and in
//! the lab frame (complex transverse field with running phase). Populations
//! in the σ_z basis are frame-invariant, so both must agree. All rates are
//! reduced by ħ: the trait methods return Ω(t)/ħ and ω(t)/ħ.
//!
//! Unitarity is monitored, never enforced: the integration fails loudly when
//! the norm defect exceeds 100× the requested tolerance.

use crate::error::{ensure_finite, Error, Result};
use crate::ode::{self, Tolerances};
use crate::schemes::{pulse_area_unchecked, Detuning, DrivingScheme};
use num_complex::Complex64;

/// Default lab-frame carrier ω₀ (a negative constant, in Γ/ħ units).
pub const DEFAULT_OMEGA0: f64 = -1.0;

/// The two columns of the propagator that determine every transition
/// probability: U = [[α, β], [−β*, α*]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl Amplitudes {
    /// |α|² + |β|².
    pub fn norm_sq(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// Transition probability from the orthogonal source state: |β|².
    pub fn transition_probability(&self) -> f64 {
        self.beta.norm_sqr()
    }
}

/// | |α|² + |β|² − 1 |, the integration-quality measure.
pub fn unitarity_defect(amps: &Amplitudes) -> f64 {
    (amps.norm_sq() - 1.0).abs()
}

/// A two-level Hamiltonian H/ħ = [[Ω̃, ω̃], [ω̃*, −Ω̃]] given by its reduced
/// longitudinal and transverse fields.
pub trait DriveHamiltonian {
    /// Ω(t)/ħ (real longitudinal field over ħ).
    fn longitudinal(&self, t: f64) -> f64;
    /// ω(t)/ħ (complex transverse field over ħ).
    fn transverse(&self, t: f64) -> Complex64;

    /// Matrix form, Hermitian and traceless by construction.
    fn matrix(&self, t: f64) -> [[Complex64; 2]; 2] {
        let om = Complex64::new(self.longitudinal(t), 0.0);
        let w = self.transverse(t);
        [[om, w], [w.conj(), -om]]
    }
}

/// Rotating-frame Hamiltonian of a scheme with constant detuning:
/// H'/ħ = (ω_H/ħ)(σ_x + β₀ σ_z).
#[derive(Debug, Clone, Copy)]
pub struct RotatingFrame {
    pub scheme: DrivingScheme,
    pub det: Detuning,
}

impl DriveHamiltonian for RotatingFrame {
    fn longitudinal(&self, t: f64) -> f64 {
        self.det.beta0() * self.scheme.gamma_rate() * self.scheme.envelope(t)
    }

    fn transverse(&self, t: f64) -> Complex64 {
        Complex64::new(self.scheme.gamma_rate() * self.scheme.envelope(t), 0.0)
    }
}

/// Rotating-frame matrix [[β₀ ω_H, ω_H], [ω_H, −β₀ ω_H]]/ħ at time `t`.
pub fn rotating_frame_hamiltonian(scheme: &DrivingScheme, det: &Detuning, t: f64) -> [[Complex64; 2]; 2] {
    RotatingFrame { scheme: *scheme, det: *det }.matrix(t)
}

/// Lab-frame field realization with a constant longitudinal field
/// Ω = −ħω₀/2 and transverse phase φ_ω(t) = ω₀ t + 2β₀ ∫₀^t ω_H/ħ, chosen so
/// the induced detuning equals the target β₀ at every instant.
#[derive(Debug, Clone, Copy)]
pub struct FieldRealization {
    scheme: DrivingScheme,
    det: Detuning,
    omega0: f64,
}

impl FieldRealization {
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Transverse phase φ_ω(t).
    pub fn phi_omega(&self, t: f64) -> f64 {
        self.omega0 * t + 2.0 * self.det.beta0() * pulse_area_unchecked(&self.scheme, t)
    }

    /// Phase rate φ̇_ω(t) = ω₀ + 2β₀ ω_H(t)/ħ.
    pub fn phi_omega_dot(&self, t: f64) -> f64 {
        self.omega0 + 2.0 * self.det.beta0() * self.scheme.gamma_rate() * self.scheme.envelope(t)
    }

    /// The detuning parameter induced by these fields at time `t`; constant
    /// and equal to the target β₀ wherever the envelope is nonzero.
    pub fn induced_beta0(&self, t: f64) -> Result<f64> {
        crate::schemes::detuning_beta0(
            self.phi_omega_dot(t),
            -0.5 * self.omega0,
            self.scheme.gamma_rate() * self.scheme.envelope(t),
            1.0,
        )
    }
}

impl DriveHamiltonian for FieldRealization {
    fn longitudinal(&self, _t: f64) -> f64 {
        -0.5 * self.omega0
    }

    fn transverse(&self, t: f64) -> Complex64 {
        let intensity = self.scheme.gamma_rate() * self.scheme.envelope(t);
        Complex64::from_polar(intensity, self.phi_omega(t))
    }
}

/// Build the lab-frame realization; `omega0` must be a negative constant.
pub fn lab_frame_fields(scheme: &DrivingScheme, det: &Detuning, omega0: f64) -> Result<FieldRealization> {
    ensure_finite("omega0", omega0)?;
    if omega0 >= 0.0 {
        return Err(Error::invalid(format!("omega0 must be negative, got {omega0}")));
    }
    Ok(FieldRealization { scheme: *scheme, det: *det, omega0 })
}

/// Reference frame for the numeric transition probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Rotating,
    /// Lab frame with the default carrier [`DEFAULT_OMEGA0`].
    Lab,
}

fn amplitude_rhs<H: DriveHamiltonian>(h: &H) -> impl Fn(f64, &[f64; 4]) -> Result<[f64; 4]> + '_ {
    |t, y| {
        let alpha = Complex64::new(y[0], y[1]);
        let beta = Complex64::new(y[2], y[3]);
        let om = h.longitudinal(t);
        let w = h.transverse(t);
        let adot = -Complex64::i() * (om * alpha - w * beta.conj());
        let bdot = -Complex64::i() * (w * alpha.conj() + om * beta);
        Ok([adot.re, adot.im, bdot.re, bdot.im])
    }
}

fn to_amplitudes(y: &[f64; 4]) -> Amplitudes {
    Amplitudes { alpha: Complex64::new(y[0], y[1]), beta: Complex64::new(y[2], y[3]) }
}

fn defect_limit(tol: Tolerances) -> f64 {
    100.0 * tol.abs.max(tol.rel)
}

/// Evolve from α = 1, β = 0 to `t_final`. No per-step renormalization: the
/// defect is measured and the evolution rejected when it exceeds 100×tol.
pub fn evolve_amplitudes<H: DriveHamiltonian>(h: &H, t_final: f64, tol: Tolerances) -> Result<Amplitudes> {
    ensure_finite("t_final", t_final)?;
    if t_final < 0.0 {
        return Err(Error::invalid(format!("t_final must be nonnegative, got {t_final}")));
    }
    if t_final == 0.0 {
        return Ok(Amplitudes { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) });
    }
    let sol = ode::solve(amplitude_rhs(h), (0.0, t_final), [1.0, 0.0, 0.0, 0.0], &[], tol)?;
    if let Some(stop) = sol.stop {
        return Err(stop.into_error());
    }
    let amps = to_amplitudes(&sol.y_end);
    let defect = unitarity_defect(&amps);
    let limit = defect_limit(tol);
    if defect > limit {
        return Err(Error::UnitarityLoss { defect, limit });
    }
    Ok(amps)
}

/// One evolution with dense output on an ascending time grid (`t ≥ 0`).
pub fn evolve_amplitudes_on_grid<H: DriveHamiltonian>(
    h: &H,
    t_grid: &[f64],
    tol: Tolerances,
) -> Result<Vec<Amplitudes>> {
    let t_final = *t_grid.last().ok_or_else(|| Error::invalid("empty time grid".to_string()))?;
    if t_grid[0] < 0.0 {
        return Err(Error::invalid("time grid must be nonnegative".to_string()));
    }
    if t_final == 0.0 {
        return Ok(vec![Amplitudes { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) }; t_grid.len()]);
    }
    let sol = ode::solve(amplitude_rhs(h), (0.0, t_final), [1.0, 0.0, 0.0, 0.0], t_grid, tol)?;
    if let Some(stop) = sol.stop {
        return Err(stop.into_error());
    }
    let amps: Vec<Amplitudes> = sol.y.iter().map(to_amplitudes).collect();
    let limit = defect_limit(tol);
    for a in &amps {
        let defect = unitarity_defect(a);
        if defect > limit {
            return Err(Error::UnitarityLoss { defect, limit });
        }
    }
    Ok(amps)
}

/// |⟨w|U(t)|w⊥⟩|² by direct integration in the chosen frame.
pub fn transition_probability_numeric(
    scheme: &DrivingScheme,
    det: &Detuning,
    t: f64,
    frame: Frame,
    tol: Tolerances,
) -> Result<f64> {
    let amps = match frame {
        Frame::Rotating => evolve_amplitudes(&RotatingFrame { scheme: *scheme, det: *det }, t, tol)?,
        Frame::Lab => evolve_amplitudes(&lab_frame_fields(scheme, det, DEFAULT_OMEGA0)?, t, tol)?,
    };
    Ok(amps.transition_probability())
}

/// Numeric transition probabilities on an ascending grid from one evolution.
pub fn transition_probabilities_on_grid(
    scheme: &DrivingScheme,
    det: &Detuning,
    t_grid: &[f64],
    frame: Frame,
    tol: Tolerances,
) -> Result<Vec<f64>> {
    let amps = match frame {
        Frame::Rotating => evolve_amplitudes_on_grid(&RotatingFrame { scheme: *scheme, det: *det }, t_grid, tol)?,
        Frame::Lab => evolve_amplitudes_on_grid(&lab_frame_fields(scheme, det, DEFAULT_OMEGA0)?, t_grid, tol)?,
    };
    Ok(amps.iter().map(Amplitudes::transition_probability).collect())
}

/// Probability that a source state with overlap `x` = ⟨w|s⟩ reaches the
/// target: |α|²x² + |β|²(1−x²) + (αβ* + α*β) x√(1−x²).
pub fn source_transition_probability(amps: &Amplitudes, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("overlap x must lie in [-1, 1], got {x}")));
    }
    let x2 = x * x;
    let cross = (amps.alpha * amps.beta.conj() + amps.alpha.conj() * amps.beta).re;
    Ok(amps.alpha.norm_sqr() * x2
        + amps.beta.norm_sqr() * (1.0 - x2)
        + cross * x * (1.0 - x2).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;
    use crate::schemes::{success_probability, SchemeKind};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn lam() -> f64 {
        2.0 / PI
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    struct ZeroField;

    impl DriveHamiltonian for ZeroField {
        fn longitudinal(&self, _t: f64) -> f64 {
            0.0
        }
        fn transverse(&self, _t: f64) -> Complex64 {
            Complex64::new(0.0, 0.0)
        }
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let amps = evolve_amplitudes(&ZeroField, 5.0, tol()).unwrap();
        assert!((amps.alpha - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(amps.beta.norm() < 1e-12);
    }

    #[test]
    fn amplitude_equations_reproduce_constant_resonant_rabi() {
        // Sanity gate before the equations are used anywhere else:
        // constant on-resonance driving must give |beta(t)|^2 = sin^2(Gamma t / hbar).
        let con = DrivingScheme::constant(1.0).unwrap();
        let rf = RotatingFrame { scheme: con, det: Detuning::on_resonance() };
        let grid = linspace(0.0, 2.0 * PI, 41);
        let amps = evolve_amplitudes_on_grid(&rf, &grid, tol()).unwrap();
        for (t, a) in grid.iter().zip(&amps) {
            let expect = t.sin().powi(2);
            assert!(
                (a.transition_probability() - expect).abs() < 1e-8,
                "t={t}: got {} want {expect}",
                a.transition_probability()
            );
        }
        // pi pulse at t = pi/2.
        let a = evolve_amplitudes(&rf, FRAC_PI_2, tol()).unwrap();
        assert!((a.transition_probability() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn static_detuned_rabi_half_transfer() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let det = Detuning::new(1.0).unwrap();
        let p = transition_probability_numeric(&con, &det, PI / (2.0 * 2f64.sqrt()), Frame::Rotating, tol())
            .unwrap();
        assert!((p - 0.5).abs() < 1e-8, "got {p}");
    }

    #[test]
    fn rotating_frame_matrix_structure() {
        let con = DrivingScheme::constant(1.3).unwrap();
        let det = Detuning::new(0.7).unwrap();
        let m = rotating_frame_hamiltonian(&con, &det, 2.0);
        // Time independent for the constant scheme: Gamma (sigma_x + beta0 sigma_z).
        assert_eq!(m[0][0].re, 0.7 * 1.3);
        assert_eq!(m[0][1].re, 1.3);
        for t in [0.0, 0.5, 3.0] {
            let m = rotating_frame_hamiltonian(&con, &det, t);
            assert_eq!(m[0][0] + m[1][1], Complex64::new(0.0, 0.0), "traceless");
            assert_eq!(m[0][1], m[1][0].conj(), "Hermitian");
        }
        // Resonant collapse: pure sigma_x.
        let osc = DrivingScheme::oscillatory(1.0, lam()).unwrap();
        let m = rotating_frame_hamiltonian(&osc, &Detuning::on_resonance(), 0.3);
        assert_eq!(m[0][0], Complex64::new(0.0, 0.0));
        assert_eq!(m[0][1].re, osc.envelope(0.3));
    }

    #[test]
    fn lab_frame_realization_induces_constant_beta0() {
        for kind in SchemeKind::ALL {
            let s = DrivingScheme::new(kind, 1.0, lam()).unwrap();
            for &b in &[0.0, 0.25, 1.0] {
                let det = Detuning::new(b).unwrap();
                let fields = lab_frame_fields(&s, &det, -1.0).unwrap();
                // Stay inside the positive-envelope domain for the check.
                for &t in &[0.0, 0.4, 1.1, 2.0] {
                    let induced = fields.induced_beta0(t).unwrap();
                    assert!(
                        (induced - b).abs() <= 4.0 * f64::EPSILON * (1.0 + b),
                        "{kind:?} b={b} t={t}: induced {induced}"
                    );
                }
            }
        }
    }

    #[test]
    fn lab_frame_resonant_choice_and_constant_phase() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let fields = lab_frame_fields(&con, &Detuning::on_resonance(), -2.0).unwrap();
        assert_eq!(fields.phi_omega_dot(1.7), -2.0);
        assert_eq!(fields.longitudinal(0.0), 1.0); // -hbar omega0 / 2, reduced
        let det1 = Detuning::new(1.0).unwrap();
        let fields = lab_frame_fields(&con, &det1, -2.0).unwrap();
        // phi(t) = (omega0 + 2 Gamma/hbar) t for the constant scheme.
        for &t in &[0.3, 1.0, 2.5] {
            assert!((fields.phi_omega(t) - (-2.0 + 2.0) * t).abs() < 1e-15);
        }
        assert!(lab_frame_fields(&con, &det1, 0.5).is_err());
        assert!(lab_frame_fields(&con, &det1, 0.0).is_err());
    }

    #[test]
    fn numeric_matches_closed_form_probabilities() {
        let grid = linspace(0.0, 2.0 * PI, 60);
        for kind in SchemeKind::ALL {
            let s = DrivingScheme::new(kind, 1.0, lam()).unwrap();
            let det = Detuning::new(0.5).unwrap();
            let numeric = transition_probabilities_on_grid(&s, &det, &grid, Frame::Rotating, tol()).unwrap();
            for (t, p) in grid.iter().zip(&numeric) {
                let closed = success_probability(&s, &det, *t).unwrap();
                assert!((p - closed).abs() < 1e-6, "{kind:?} t={t}: numeric {p} closed {closed}");
            }
        }
    }

    #[test]
    fn frames_agree() {
        let grid = linspace(0.0, 2.0 * PI, 25);
        for kind in [SchemeKind::Constant, SchemeKind::ExponentialDecay] {
            let s = DrivingScheme::new(kind, 1.0, lam()).unwrap();
            let det = Detuning::new(0.25).unwrap();
            let rot = transition_probabilities_on_grid(&s, &det, &grid, Frame::Rotating, tol()).unwrap();
            let lab = transition_probabilities_on_grid(&s, &det, &grid, Frame::Lab, tol()).unwrap();
            for ((t, a), b) in grid.iter().zip(&rot).zip(&lab) {
                assert!((a - b).abs() < 1e-6, "{kind:?} t={t}: rotating {a} lab {b}");
            }
        }
    }

    #[test]
    fn source_probability_values() {
        let amps = Amplitudes { alpha: Complex64::new(0.6, 0.0), beta: Complex64::new(0.0, 0.8) };
        assert!((source_transition_probability(&amps, 0.0).unwrap() - 0.64).abs() < 1e-15);
        assert!((source_transition_probability(&amps, 1.0).unwrap() - 0.36).abs() < 1e-15);
        // alpha = 1/sqrt2, beta = i/sqrt2, x = 1/sqrt2: cross term vanishes.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = Amplitudes { alpha: Complex64::new(s, 0.0), beta: Complex64::new(0.0, s) };
        let p = source_transition_probability(&amps, s).unwrap();
        assert!((p - 0.5).abs() < 1e-15, "got {p}");
        assert!(source_transition_probability(&amps, 1.5).is_err());
        assert!(source_transition_probability(&amps, f64::NAN).is_err());
    }

    #[test]
    fn source_probability_complement_for_unit_norm() {
        let amps = evolve_amplitudes(
            &RotatingFrame {
                scheme: DrivingScheme::exponential_decay(1.0, lam()).unwrap(),
                det: Detuning::new(0.5).unwrap(),
            },
            1.3,
            tol(),
        )
        .unwrap();
        let sum = source_transition_probability(&amps, 0.0).unwrap()
            + source_transition_probability(&amps, 1.0).unwrap();
        assert!((sum - 1.0).abs() < 1e-9, "got {sum}");
    }

    #[test]
    fn unitarity_defect_values() {
        let a = Amplitudes { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) };
        assert_eq!(unitarity_defect(&a), 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = Amplitudes { alpha: Complex64::new(s, 0.0), beta: Complex64::new(s, 0.0) };
        assert!(unitarity_defect(&a) < 1e-15);
        // Integrated evolutions at tol 1e-10 stay below 1e-8.
        let rf = RotatingFrame {
            scheme: DrivingScheme::oscillatory(1.0, lam()).unwrap(),
            det: Detuning::new(1.0).unwrap(),
        };
        let amps = evolve_amplitudes(&rf, 2.0 * PI, tol()).unwrap();
        assert!(unitarity_defect(&amps) <= 1e-8);
    }

    #[test]
    fn rejects_negative_time() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let det = Detuning::on_resonance();
        assert!(transition_probability_numeric(&con, &det, -1.0, Frame::Rotating, tol()).is_err());
        let p = transition_probability_numeric(&con, &det, 0.0, Frame::Rotating, tol()).unwrap();
        assert_eq!(p, 0.0);
    }
}
