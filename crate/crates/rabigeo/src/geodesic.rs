//! Geodesics of the Fisher metric on the 1-parameter probability manifold.
//!
//! The geodesic equation θ'' + (1/2F)(dF/dθ) θ'² = 0 is integrated per scheme
//! from its closed-form acceleration; a generic fallback built on the closed
//! Fisher information and a numeric dF/dθ serves as an independent check.
//!
//! Off resonance the acceleration carries tan(Σ) factors whose poles are
//! genuine metric degeneracies (F → 0, θ' → ∞ at finite ξ). Integration does
//! not step across a pole: it stops with a structured halt report carrying
//! the last accepted state, and the samples collected so far stay valid.

use crate::error::{ensure_finite, Error, Result};
use crate::fisher::{dsigma_dtheta, fisher_closed};
use crate::grid::linspace;
use crate::ode::{self, Tolerances};
use crate::quad;
use crate::schemes::{sigma_unchecked, Detuning, DrivingScheme};
use std::f64::consts::{FRAC_PI_2, PI};

/// How close (in radians) a tan argument may come to π/2 mod π.
pub const TAN_POLE_GUARD: f64 = 1e-9;

/// Instantaneous state of a geodesic: affine parameter, position, velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub xi: f64,
    pub theta: f64,
    pub theta_dot: f64,
}

/// One dense-output sample with its geodesic speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSample {
    pub xi: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub speed: f64,
}

/// Why an integration ended before covering its span.
#[derive(Debug)]
pub struct GeodesicHalt {
    /// Last accepted state before the stop.
    pub state: GeodesicState,
    /// The underlying singularity / step failure.
    pub error: Error,
}

/// An integrated geodesic: ordered samples plus the context that produced them.
#[derive(Debug)]
pub struct GeodesicTrajectory {
    scheme: DrivingScheme,
    det: Detuning,
    tol: Tolerances,
    initial: GeodesicSample,
    samples: Vec<GeodesicSample>,
    /// `None` when the full ξ-span was covered.
    pub halt: Option<GeodesicHalt>,
}

impl GeodesicTrajectory {
    pub fn scheme(&self) -> &DrivingScheme {
        &self.scheme
    }

    pub fn detuning(&self) -> &Detuning {
        &self.det
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    /// State at ξ₀ with its speed.
    pub fn initial(&self) -> GeodesicSample {
        self.initial
    }

    /// Dense-output samples, strictly ascending in ξ.
    pub fn samples(&self) -> &[GeodesicSample] {
        &self.samples
    }

    pub fn completed(&self) -> bool {
        self.halt.is_none()
    }

    /// The arc-length rate a₀ = √F(θ₀) · θ'₀ (twice the signed initial speed).
    pub fn arc_rate(&self) -> f64 {
        fisher_closed(&self.scheme, &self.det, self.initial.theta).sqrt() * self.initial.theta_dot
    }

    /// max |v(ξ) − v(ξ₀)| / v(ξ₀) over the samples; `None` when v(ξ₀) = 0.
    pub fn max_speed_drift(&self) -> Option<f64> {
        let v0 = self.initial.speed;
        if v0 == 0.0 {
            return None;
        }
        self.samples
            .iter()
            .map(|s| (s.speed - v0).abs() / v0)
            .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.max(d))))
    }

    /// True when any sample left the scheme's positive-envelope domain.
    pub fn domain_warning(&self) -> bool {
        self.samples.iter().any(|s| self.scheme.domain_warning(s.theta))
    }
}

fn tan_pole_distance(x: f64) -> f64 {
    let k = ((x - FRAC_PI_2) / PI).round();
    (x - (FRAC_PI_2 + k * PI)).abs()
}

fn guarded_tan(theta: f64, arg: f64) -> Result<f64> {
    if tan_pole_distance(arg) < TAN_POLE_GUARD {
        return Err(Error::TanPole { theta, argument: arg });
    }
    Ok(arg.tan())
}

/// Closed-form geodesic acceleration θ'' for the given state.
///
/// Fails with [`Error::TanPole`] when a tan argument sits within
/// [`TAN_POLE_GUARD`] of π/2 mod π; the right-hand side is unbounded there.
pub fn geodesic_acceleration(scheme: &DrivingScheme, det: &Detuning, state: &GeodesicState) -> Result<f64> {
    let theta = state.theta;
    let lead = match *scheme {
        DrivingScheme::Constant { .. } => 0.0,
        DrivingScheme::Oscillatory { lambda, .. } => lambda * guarded_tan(theta, lambda * theta)?,
        DrivingScheme::PowerLawDecay { lambda, .. } => 2.0 * lambda / (1.0 + lambda * theta),
        DrivingScheme::ExponentialDecay { lambda, .. } => lambda,
    };
    let a = det.amp_factor();
    let corr = if a < 1.0 {
        let sig = sigma_unchecked(scheme, det, theta);
        let t = guarded_tan(theta, sig)?;
        let s = sig.sin();
        (1.0 - a) * dsigma_dtheta(scheme, det, theta) * t / (1.0 - a * s * s)
    } else {
        // On resonance the (1 - A) factor removes the whole correction term.
        0.0
    };
    Ok((lead + corr) * state.theta_dot * state.theta_dot)
}

/// Generic fallback: θ'' = −(1/2F)(dF/dθ) θ'² with analytic F and numeric dF/dθ.
///
/// Valid where F(θ) > 0; used as an independent check of the closed forms.
pub fn geodesic_acceleration_generic(scheme: &DrivingScheme, det: &Detuning, state: &GeodesicState) -> f64 {
    let f = fisher_closed(scheme, det, state.theta);
    let h = f64::EPSILON.cbrt() * state.theta.abs().max(1.0);
    let df = (fisher_closed(scheme, det, state.theta + h) - fisher_closed(scheme, det, state.theta - h)) / (2.0 * h);
    -0.5 * df / f * state.theta_dot * state.theta_dot
}

/// Geodesic speed v = ½ √F(θ) |θ'| from the closed-form Fisher information.
pub fn geodesic_speed(scheme: &DrivingScheme, det: &Detuning, theta: f64, theta_dot: f64) -> f64 {
    0.5 * fisher_closed(scheme, det, theta).sqrt() * theta_dot.abs()
}

/// Integrate the geodesic over `xi_span`, sampling `n_samples` equally
/// spaced ξ values (endpoints included).
pub fn integrate_geodesic(
    scheme: &DrivingScheme,
    det: &Detuning,
    theta0: f64,
    theta_dot0: f64,
    xi_span: (f64, f64),
    n_samples: usize,
    tol: Tolerances,
) -> Result<GeodesicTrajectory> {
    let xi_eval = linspace(xi_span.0, xi_span.1, n_samples);
    integrate_geodesic_at(scheme, det, theta0, theta_dot0, xi_span, &xi_eval, tol)
}

/// Integrate the geodesic with caller-chosen dense-output positions.
pub fn integrate_geodesic_at(
    scheme: &DrivingScheme,
    det: &Detuning,
    theta0: f64,
    theta_dot0: f64,
    xi_span: (f64, f64),
    xi_eval: &[f64],
    tol: Tolerances,
) -> Result<GeodesicTrajectory> {
    ensure_finite("theta0", theta0)?;
    ensure_finite("theta_dot0", theta_dot0)?;
    let rhs = |xi: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let state = GeodesicState { xi, theta: y[0], theta_dot: y[1] };
        Ok([y[1], geodesic_acceleration(scheme, det, &state)?])
    };
    let sol = ode::solve(rhs, xi_span, [theta0, theta_dot0], xi_eval, tol)?;
    let samples = sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&xi, y)| GeodesicSample {
            xi,
            theta: y[0],
            theta_dot: y[1],
            speed: geodesic_speed(scheme, det, y[0], y[1]),
        })
        .collect();
    let halt = sol.stop.map(|stop| GeodesicHalt {
        state: GeodesicState { xi: sol.t_end, theta: sol.y_end[0], theta_dot: sol.y_end[1] },
        error: stop.into_error(),
    });
    Ok(GeodesicTrajectory {
        scheme: *scheme,
        det: *det,
        tol,
        initial: GeodesicSample {
            xi: xi_span.0,
            theta: theta0,
            theta_dot: theta_dot0,
            speed: geodesic_speed(scheme, det, theta0, theta_dot0),
        },
        samples,
        halt,
    })
}

/// Max over samples of |∫√F dθ − a₀ (ξ − ξ₀)| with a₀ fixed by the initial
/// data; the θ-integral is accumulated segmentwise by adaptive quadrature
/// along the sampled path.
pub fn constraint_residual(traj: &GeodesicTrajectory) -> Result<f64> {
    if traj.samples.len() < 2 {
        return Err(Error::invalid("constraint residual needs at least two samples".to_string()));
    }
    let a0 = traj.arc_rate();
    let xi0 = traj.initial.xi;
    let sqrt_f = |theta: f64| fisher_closed(&traj.scheme, &traj.det, theta).sqrt();
    let mut cumulative = 0.0;
    let mut prev_theta = traj.initial.theta;
    let mut worst: f64 = 0.0;
    for s in &traj.samples {
        cumulative += quad::integrate(sqrt_f, prev_theta, s.theta, 1e-15, 1e-12)?;
        prev_theta = s.theta;
        let residual = (cumulative - a0 * (s.xi - xi0)).abs();
        worst = worst.max(residual);
    }
    Ok(worst)
}

/// Conserved-speed measurement from a short integrated arc starting at θ₀
/// with |θ'₀| = 1.
///
/// Integrates a ξ-arc of length 0.02 and returns the speed at the farthest
/// reached sample. The arc direction is flipped when the forward direction
/// runs into a tan pole, which leaves the speed unchanged. Falls back to the
/// initial-data speed when θ₀ itself sits inside a pole guard band.
pub fn numeric_initial_speed(scheme: &DrivingScheme, det: &Detuning, theta0: f64, tol: Tolerances) -> Result<f64> {
    const ARC: f64 = 0.02;
    let mut best: Option<GeodesicSample> = None;
    for dir in [1.0, -1.0] {
        let traj = integrate_geodesic(scheme, det, theta0, dir, (0.0, ARC), 9, tol)?;
        if let Some(last) = traj.samples().last().copied() {
            if last.xi > 0.0 && best.map_or(true, |b| last.xi > b.xi) {
                best = Some(last);
            }
        }
        if traj.completed() {
            break;
        }
    }
    Ok(best.map_or_else(|| geodesic_speed(scheme, det, theta0, 1.0), |s| s.speed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::SchemeKind;

    fn lam() -> f64 {
        2.0 / PI
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn acceleration_constant_on_resonance_is_zero() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let det = Detuning::on_resonance();
        for &(theta, theta_dot) in &[(0.0, 1.0), (2.0, -3.0), (11.0, 0.5)] {
            let state = GeodesicState { xi: 0.0, theta, theta_dot };
            assert_eq!(geodesic_acceleration(&con, &det, &state).unwrap(), 0.0);
        }
    }

    #[test]
    fn acceleration_oscillatory_on_resonance_form() {
        let osc = DrivingScheme::oscillatory(1.0, lam()).unwrap();
        let det = Detuning::on_resonance();
        for &theta in &[0.1, 0.8, 1.9] {
            for &td in &[1.0, -2.0] {
                let state = GeodesicState { xi: 0.0, theta, theta_dot: td };
                let got = geodesic_acceleration(&osc, &det, &state).unwrap();
                let want = lam() * (lam() * theta).tan() * td * td;
                assert!((got - want).abs() < 1e-15 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn acceleration_matches_generic_fallback() {
        for kind in SchemeKind::ALL {
            let s = DrivingScheme::new(kind, 1.0, lam()).unwrap();
            for &b in &[0.25, 0.5, 1.0] {
                let det = Detuning::new(b).unwrap();
                for &theta in &[0.1, 0.3, 0.7, 1.1] {
                    let state = GeodesicState { xi: 0.0, theta, theta_dot: 1.3 };
                    let closed = geodesic_acceleration(&s, &det, &state).unwrap();
                    let generic = geodesic_acceleration_generic(&s, &det, &state);
                    let scale = closed.abs().max(1.0);
                    assert!(
                        ((closed - generic) / scale).abs() < 1e-8,
                        "{kind:?} b={b} theta={theta}: closed={closed} generic={generic}"
                    );
                }
            }
        }
        // The spec'd spot value: constant, beta0 = 0.5, theta = 0.3.
        let con = DrivingScheme::constant(1.0).unwrap();
        let det = Detuning::new(0.5).unwrap();
        let state = GeodesicState { xi: 0.0, theta: 0.3, theta_dot: 1.0 };
        let closed = geodesic_acceleration(&con, &det, &state).unwrap();
        let generic = geodesic_acceleration_generic(&con, &det, &state);
        assert!((closed - generic).abs() < 1e-8 * closed.abs().max(1.0));
    }

    #[test]
    fn tan_pole_guard_fires() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let det = Detuning::new(0.5).unwrap();
        let b = det.rabi_rate(1.0);
        let pole_theta = FRAC_PI_2 / b;
        let state = GeodesicState { xi: 0.0, theta: pole_theta, theta_dot: 1.0 };
        match geodesic_acceleration(&con, &det, &state) {
            Err(Error::TanPole { theta, .. }) => assert!((theta - pole_theta).abs() < 1e-12),
            other => panic!("expected tan-pole error, got {other:?}"),
        }
        // On resonance the constant scheme has no pole anywhere.
        let on = Detuning::on_resonance();
        assert!(geodesic_acceleration(&con, &on, &state).is_ok());
    }

    #[test]
    fn straight_line_on_resonance() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let traj =
            integrate_geodesic(&con, &Detuning::on_resonance(), 0.0, 1.0, (0.0, 3.0), 151, tol()).unwrap();
        assert!(traj.completed());
        let worst = traj
            .samples()
            .iter()
            .map(|s| (s.theta - s.xi).abs())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1e-9, "max deviation from straight line {worst}");
    }

    #[test]
    fn stationary_solution() {
        for kind in SchemeKind::ALL {
            let s = DrivingScheme::new(kind, 1.0, lam()).unwrap();
            for &b in &[0.0, 0.5] {
                let det = Detuning::new(b).unwrap();
                let traj = integrate_geodesic(&s, &det, 0.2, 0.0, (0.0, 2.0), 21, tol()).unwrap();
                assert!(traj.completed());
                for smp in traj.samples() {
                    assert_eq!(smp.theta, 0.2, "{kind:?} b={b}");
                    assert_eq!(smp.speed, 0.0);
                }
                assert!(traj.max_speed_drift().is_none());
            }
        }
    }

    #[test]
    fn constant_speed_and_constraint_off_resonance() {
        for kind in SchemeKind::ALL {
            let s = DrivingScheme::new(kind, 1.0, lam()).unwrap();
            let det = Detuning::new(0.5).unwrap();
            let traj = integrate_geodesic(&s, &det, 0.0, 1.0, (0.0, 0.6), 61, tol()).unwrap();
            assert!(traj.completed(), "{kind:?} halted: {:?}", traj.halt);
            let drift = traj.max_speed_drift().unwrap();
            assert!(drift <= 1e-9, "{kind:?} speed drift {drift}");
            let res = constraint_residual(&traj).unwrap();
            let bound = 10.0 * tol().rel * traj.arc_rate().abs() * 0.6;
            assert!(res <= bound, "{kind:?} residual {res} > {bound}");
        }
    }

    #[test]
    fn oscillatory_on_resonance_halts_at_metric_zero() {
        // v is conserved, so theta' ~ 1/cos(lambda theta) blows up where the
        // envelope vanishes; the exact blow-up is at xi = 1/lambda = pi/2.
        let osc = DrivingScheme::oscillatory(1.0, lam()).unwrap();
        let traj =
            integrate_geodesic(&osc, &Detuning::on_resonance(), 0.0, 1.0, (0.0, 3.0), 301, tol()).unwrap();
        let halt = traj.halt.as_ref().expect("must halt");
        assert!((halt.state.xi - FRAC_PI_2).abs() < 1e-3, "halted at {}", halt.state.xi);
        assert!(!traj.samples().is_empty());
        assert!(traj.samples().last().unwrap().xi <= halt.state.xi);
    }

    #[test]
    fn off_resonance_halts_near_predicted_pole() {
        // From theta0 = 0 with unit velocity the pole sits at xi = asin{sqrt(A)}.
        for kind in SchemeKind::ALL {
            let s = DrivingScheme::new(kind, 1.0, lam()).unwrap();
            let det = Detuning::new(0.5).unwrap();
            let traj = integrate_geodesic(&s, &det, 0.0, 1.0, (0.0, 3.0), 31, tol()).unwrap();
            let halt = traj.halt.expect("must halt off resonance");
            let predicted = det.amp_factor().sqrt().asin();
            assert!(
                (halt.state.xi - predicted).abs() < 1e-3,
                "{kind:?}: halt at {} vs predicted {predicted}",
                halt.state.xi
            );
        }
    }

    #[test]
    fn tolerance_refinement_converges() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let det = Detuning::new(0.5).unwrap();
        let reference = integrate_geodesic(&con, &det, 0.0, 1.0, (0.0, 0.8), 9, Tolerances::uniform(1e-12))
            .unwrap()
            .samples()
            .to_vec();
        let dev = |tol: f64| {
            let traj =
                integrate_geodesic(&con, &det, 0.0, 1.0, (0.0, 0.8), 9, Tolerances::uniform(tol)).unwrap();
            traj.samples()
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a.theta - b.theta).abs())
                .fold(0.0f64, f64::max)
        };
        let coarse = dev(1e-5);
        let mid = dev(1e-7);
        let fine = dev(1e-9);
        assert!(coarse > mid && mid > fine, "deviations not decreasing: {coarse} {mid} {fine}");
    }

    #[test]
    fn fixed_step_order_on_geodesic() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let det = Detuning::new(0.5).unwrap();
        let rhs = |xi: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
            let state = GeodesicState { xi, theta: y[0], theta_dot: y[1] };
            Ok([y[1], geodesic_acceleration(&con, &det, &state)?])
        };
        let reference = ode::solve_fixed(rhs, (0.0, 0.8), [0.0, 1.0], 4096).unwrap();
        let err = |n: usize| {
            let y = ode::solve_fixed(rhs, (0.0, 0.8), [0.0, 1.0], n).unwrap();
            (y[0] - reference[0]).abs().max((y[1] - reference[1]).abs())
        };
        let ratio = err(32) / err(64);
        assert!(ratio > 16.0, "empirical order below 4: ratio {ratio}");
    }

    #[test]
    fn speed_is_half_sqrt_fisher() {
        let exp = DrivingScheme::exponential_decay(1.0, lam()).unwrap();
        let det = Detuning::new(0.5).unwrap();
        for &theta in &[0.0, 0.4, 1.3] {
            let v = geodesic_speed(&exp, &det, theta, 1.0);
            assert_eq!(v, 0.5 * fisher_closed(&exp, &det, theta).sqrt());
            assert_eq!(geodesic_speed(&exp, &det, theta, 0.0), 0.0);
            // |theta'| keeps speeds nonnegative for reversed arcs.
            assert_eq!(geodesic_speed(&exp, &det, theta, -2.0), 2.0 * v);
        }
    }

    #[test]
    fn numeric_initial_speed_matches_closed_form() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let det = Detuning::new(0.5).unwrap();
        for &theta0 in &[0.0, 0.7, 1.39, 1.42, 4.2, 6.0] {
            let numeric = numeric_initial_speed(&con, &det, theta0, tol()).unwrap();
            let analytic = geodesic_speed(&con, &det, theta0, 1.0);
            assert!(
                (numeric - analytic).abs() <= 1e-8,
                "theta0={theta0}: numeric={numeric} analytic={analytic}"
            );
        }
    }

    #[test]
    fn constraint_needs_two_samples() {
        let con = DrivingScheme::constant(1.0).unwrap();
        let traj =
            integrate_geodesic(&con, &Detuning::on_resonance(), 0.0, 1.0, (0.0, 1.0), 1, tol()).unwrap();
        assert!(constraint_residual(&traj).is_err());
    }
}
