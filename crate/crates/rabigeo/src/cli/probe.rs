//! The `probe` subcommand: evaluate any public operation with explicit
//! parameters, printing full-precision values.
//!
//! Positional arguments fill the operation's parameter list in order; the
//! literal `default` (or `_`) keeps a parameter at its configured default.
//! Scheme-valued parameters take a scheme name.

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::oracle::{self, Amplitudes, Frame};
use crate::resonance::{
    classical_resonance_curve, classical_resonant_frequency, field_components, field_intensities,
    quantum_resonance_curve, quantum_resonant_frequency, static_beta0, ClassicalOscillator,
    TwoLevelStatic,
};
use crate::schemes::{Detuning, DrivingScheme, SchemeKind};
use crate::{fisher, geodesic, robustness, schemes};
use num_complex::Complex64;

pub const OPERATIONS: &[(&str, &str)] = &[
    ("amplitude_factor", "beta0"),
    ("rabi_rate", "beta0 gamma_rate"),
    ("detuning_beta0", "phi_dot omega_cap omega_h hbar"),
    ("omega_h", "scheme t gamma"),
    ("pulse_area", "scheme theta"),
    ("sigma", "scheme beta0 theta"),
    ("success_probability", "scheme beta0 theta"),
    ("failure_probability", "scheme beta0 theta"),
    ("dsigma_dtheta", "scheme beta0 theta"),
    ("fisher_generic", "scheme beta0 theta"),
    ("fisher_closed", "scheme beta0 theta"),
    ("fisher_on_resonance", "scheme theta"),
    ("geodesic_acceleration", "scheme beta0 theta theta_dot"),
    ("geodesic_speed", "scheme beta0 theta theta_dot"),
    ("v_on", "scheme theta0 theta_dot0"),
    ("v_off", "scheme beta0 theta0 theta_dot0"),
    ("robustness_coefficient", "scheme beta0 theta0"),
    ("beta0_bound_for_fidelity", "p_min"),
    ("transition_probability_numeric", "scheme beta0 t frame"),
    ("source_transition_probability", "alpha_re alpha_im beta_re beta_im x"),
    ("unitarity_defect", "alpha_re alpha_im beta_re beta_im"),
    ("classical_resonance_curve", "m damping k gamma_freq"),
    ("classical_resonant_frequency", "m damping k"),
    ("quantum_resonance_curve", "e1 e2 coupling hbar omega"),
    ("quantum_resonant_frequency", "e1 e2 hbar"),
    ("static_beta0", "m c e_abs b_perp b_par omega"),
    ("field_components", "omega_x omega_y omega_cap m c e hbar"),
    ("field_intensities", "omega_h omega_cap_h m c e_abs hbar"),
];

pub fn usage_error(op: &str) -> Error {
    let names: Vec<&str> = OPERATIONS.iter().map(|(n, _)| *n).collect();
    Error::invalid(format!("unknown operation '{op}'; available operations: {}", names.join(", ")))
}

struct Args<'a> {
    cfg: &'a RunConfig,
    values: &'a [String],
    next: usize,
}

impl<'a> Args<'a> {
    fn new(cfg: &'a RunConfig, values: &'a [String]) -> Self {
        Args { cfg, values, next: 0 }
    }

    fn raw(&mut self) -> Option<&'a str> {
        let v = self.values.get(self.next).map(String::as_str);
        self.next += 1;
        v
    }

    fn f64(&mut self, name: &str, default: f64) -> Result<f64> {
        match self.raw() {
            None | Some("default") | Some("_") => Ok(default),
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("parameter '{name}': cannot parse '{s}' as a number"))),
        }
    }

    fn scheme(&mut self) -> Result<DrivingScheme> {
        let kind = match self.raw() {
            None | Some("default") | Some("_") => self.cfg.scheme_kind()?,
            Some(s) => SchemeKind::parse(s)?,
        };
        self.cfg.build_scheme(kind)
    }

    fn detuning(&mut self) -> Result<Detuning> {
        let b = self.f64("beta0", self.cfg.beta0_scalar())?;
        Detuning::new(b)
    }

    fn frame(&mut self) -> Result<Frame> {
        match self.raw() {
            None | Some("default") | Some("_") | Some("rotating") => Ok(Frame::Rotating),
            Some("lab") => Ok(Frame::Lab),
            Some(other) => Err(Error::invalid(format!("unknown frame '{other}' (rotating|lab)"))),
        }
    }
}

/// Evaluate `op` and return the labeled value list.
pub fn evaluate(cfg: &RunConfig, op: &str, raw_args: &[String]) -> Result<Vec<(String, f64)>> {
    let mut a = Args::new(cfg, raw_args);
    let scalar = |v: f64| vec![("value".to_string(), v)];
    let out = match op {
        "amplitude_factor" => scalar(schemes::amplitude_factor(a.f64("beta0", cfg.beta0_scalar())?)?),
        "rabi_rate" => {
            let b = a.f64("beta0", cfg.beta0_scalar())?;
            scalar(schemes::rabi_rate(b, a.f64("gamma_rate", cfg.gamma_rate)?)?)
        }
        "detuning_beta0" => {
            let phi_dot = a.f64("phi_dot", 0.0)?;
            let omega_cap = a.f64("omega_cap", 0.0)?;
            let omega_h = a.f64("omega_h", 1.0)?;
            scalar(schemes::detuning_beta0(phi_dot, omega_cap, omega_h, a.f64("hbar", 1.0)?)?)
        }
        "omega_h" => {
            let s = a.scheme()?;
            let t = a.f64("t", cfg.theta0)?;
            scalar(schemes::omega_h(&s, t, a.f64("gamma", cfg.gamma_rate)?)?)
        }
        "pulse_area" => {
            let s = a.scheme()?;
            scalar(schemes::pulse_area(&s, a.f64("theta", cfg.theta0)?)?)
        }
        "sigma" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            scalar(schemes::sigma(&s, &det, a.f64("theta", cfg.theta0)?)?)
        }
        "success_probability" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            scalar(schemes::success_probability(&s, &det, a.f64("theta", cfg.theta0)?)?)
        }
        "failure_probability" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            scalar(schemes::failure_probability(&s, &det, a.f64("theta", cfg.theta0)?)?)
        }
        "dsigma_dtheta" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            scalar(fisher::dsigma_dtheta(&s, &det, a.f64("theta", cfg.theta0)?))
        }
        "fisher_generic" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            scalar(fisher::fisher_generic(&s, &det, a.f64("theta", cfg.theta0)?))
        }
        "fisher_closed" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            scalar(fisher::fisher_closed(&s, &det, a.f64("theta", cfg.theta0)?))
        }
        "fisher_on_resonance" => {
            let s = a.scheme()?;
            scalar(fisher::fisher_on_resonance(&s, a.f64("theta", cfg.theta0)?))
        }
        "geodesic_acceleration" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            let theta = a.f64("theta", cfg.theta0)?;
            let theta_dot = a.f64("theta_dot", cfg.theta_dot0)?;
            let state = geodesic::GeodesicState { xi: 0.0, theta, theta_dot };
            scalar(geodesic::geodesic_acceleration(&s, &det, &state)?)
        }
        "geodesic_speed" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            let theta = a.f64("theta", cfg.theta0)?;
            scalar(geodesic::geodesic_speed(&s, &det, theta, a.f64("theta_dot", cfg.theta_dot0)?))
        }
        "v_on" => {
            let s = a.scheme()?;
            let theta0 = a.f64("theta0", cfg.theta0)?;
            scalar(robustness::v_on(&s, theta0, a.f64("theta_dot0", cfg.theta_dot0)?))
        }
        "v_off" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            let theta0 = a.f64("theta0", cfg.theta0)?;
            scalar(robustness::v_off(&s, &det, theta0, a.f64("theta_dot0", cfg.theta_dot0)?))
        }
        "robustness_coefficient" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            let theta0 = a.f64("theta0", cfg.theta0)?;
            match robustness::robustness_coefficient(&s, &det, theta0) {
                Some(r) => scalar(r),
                None => vec![("undefined".to_string(), f64::NAN)],
            }
        }
        "beta0_bound_for_fidelity" => scalar(robustness::beta0_bound_for_fidelity(a.f64("p_min", cfg.p_min)?)?),
        "transition_probability_numeric" => {
            let s = a.scheme()?;
            let det = a.detuning()?;
            let t = a.f64("t", cfg.theta0)?;
            let frame = a.frame()?;
            scalar(oracle::transition_probability_numeric(&s, &det, t, frame, cfg.tolerances())?)
        }
        "source_transition_probability" => {
            let amps = Amplitudes {
                alpha: Complex64::new(a.f64("alpha_re", 1.0)?, a.f64("alpha_im", 0.0)?),
                beta: Complex64::new(a.f64("beta_re", 0.0)?, a.f64("beta_im", 0.0)?),
            };
            scalar(oracle::source_transition_probability(&amps, a.f64("x", 0.0)?)?)
        }
        "unitarity_defect" => {
            let amps = Amplitudes {
                alpha: Complex64::new(a.f64("alpha_re", 1.0)?, a.f64("alpha_im", 0.0)?),
                beta: Complex64::new(a.f64("beta_re", 0.0)?, a.f64("beta_im", 0.0)?),
            };
            scalar(oracle::unitarity_defect(&amps))
        }
        "classical_resonance_curve" => {
            let osc = ClassicalOscillator::new(
                a.f64("m", 1.0)?,
                a.f64("damping", 1.0)?,
                a.f64("k", 1.0)?,
                1.0,
            )?;
            scalar(classical_resonance_curve(&osc, a.f64("gamma_freq", 1.0)?)?)
        }
        "classical_resonant_frequency" => {
            let osc = ClassicalOscillator::new(
                a.f64("m", 1.0)?,
                a.f64("damping", 1.0)?,
                a.f64("k", 1.0)?,
                1.0,
            )?;
            scalar(classical_resonant_frequency(&osc)?)
        }
        "quantum_resonance_curve" => {
            let sys = TwoLevelStatic::new(
                a.f64("e1", 0.0)?,
                a.f64("e2", 1.0)?,
                a.f64("coupling", 0.1)?,
                a.f64("hbar", 1.0)?,
            )?;
            let omega = a.f64("omega", quantum_resonant_frequency(&sys))?;
            scalar(quantum_resonance_curve(&sys, omega)?)
        }
        "quantum_resonant_frequency" => {
            let sys = TwoLevelStatic::new(a.f64("e1", 0.0)?, a.f64("e2", 1.0)?, 0.1, a.f64("hbar", 1.0)?)?;
            scalar(quantum_resonant_frequency(&sys))
        }
        "static_beta0" => {
            let m = a.f64("m", 1.0)?;
            let c = a.f64("c", 1.0)?;
            let e_abs = a.f64("e_abs", 1.0)?;
            let b_perp = a.f64("b_perp", 1.0)?;
            let b_par = a.f64("b_par", 0.0)?;
            scalar(static_beta0(m, c, e_abs, b_perp, b_par, a.f64("omega", 0.0)?)?)
        }
        "field_components" => {
            let wx = a.f64("omega_x", 0.0)?;
            let wy = a.f64("omega_y", 0.0)?;
            let wz = a.f64("omega_cap", 0.0)?;
            let m = a.f64("m", 1.0)?;
            let c = a.f64("c", 1.0)?;
            let e = a.f64("e", -1.0)?;
            let (bx, by, bz) = field_components(wx, wy, wz, m, c, e, a.f64("hbar", 1.0)?);
            vec![("b_x".to_string(), bx), ("b_y".to_string(), by), ("b_z".to_string(), bz)]
        }
        "field_intensities" => {
            let wh = a.f64("omega_h", 0.0)?;
            let wch = a.f64("omega_cap_h", 0.0)?;
            let m = a.f64("m", 1.0)?;
            let c = a.f64("c", 1.0)?;
            let e_abs = a.f64("e_abs", 1.0)?;
            let (bp, bpar) = field_intensities(wh, wch, m, c, e_abs, a.f64("hbar", 1.0)?);
            vec![("b_perp".to_string(), bp), ("b_par".to_string(), bpar)]
        }
        _ => return Err(usage_error(op)),
    };
    if a.next > raw_args.len() + 8 {
        // unreachable by construction; keeps the cursor honest in debug builds
        debug_assert!(false);
    }
    Ok(out)
}
