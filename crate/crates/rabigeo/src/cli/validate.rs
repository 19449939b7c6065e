//! The `validate` subcommand: cross-validation suites with a JSON report.
//!
//! Four suites run at thresholds scaled by `tol_scale` (integrator
//! tolerances scale along, so the margins are meaningful at any scale):
//!
//! 1. oracle-equivalence: closed-form p₀ against the integrated amplitudes;
//! 2. constant-speed: speed drift and arc-length residual along geodesics;
//! 3. fisher-consistency: closed against generic route, exact collapse at β₀=0;
//! 4. region-properties: nesting, ordering, and flag consistency of the scan.

use super::config::RunConfig;
use super::figures::region_scan_from;
use crate::error::{Error, Result};
use crate::geodesic::{constraint_residual, integrate_geodesic};
use crate::fisher::{fisher_closed, fisher_generic, fisher_on_resonance};
use crate::grid::linspace;
use crate::ode::Tolerances;
use crate::oracle::{transition_probability_numeric, Frame};
use crate::schemes::{sigma_unchecked, success_probability, Detuning, SchemeKind};
use serde::Serialize;

const ORACLE_THRESHOLD: f64 = 1e-6;
const FISHER_THRESHOLD: f64 = 1e-8;
const SPEED_DRIFT_FACTOR: f64 = 10.0;

/// Deliberate formula corruption for negative-control runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Bias the closed-form success probability by 1e-3 in the oracle suite.
    Probability,
}

impl Fault {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "probability" => Ok(Fault::Probability),
            other => Err(Error::invalid(format!("unknown fault '{other}' (expected: probability)"))),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub max_deviation: f64,
    pub threshold: f64,
    pub margin_factor: f64,
    pub pass: bool,
    pub worst_case: String,
}

impl SuiteReport {
    fn new(name: &'static str, max_deviation: f64, threshold: f64, worst_case: String) -> Self {
        SuiteReport {
            name,
            max_deviation,
            threshold,
            margin_factor: if max_deviation > 0.0 { threshold / max_deviation } else { f64::INFINITY },
            pass: max_deviation <= threshold,
            worst_case,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub tol_scale: f64,
    pub integrator_tol: f64,
    pub suites: Vec<SuiteReport>,
}

pub fn run_validation(cfg: &RunConfig, tol_scale: f64, fault: Option<Fault>) -> Result<ValidationReport> {
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(Error::invalid(format!("tol-scale must be positive, got {tol_scale}")));
    }
    let tol = Tolerances::uniform(cfg.tol * tol_scale);
    let suites = vec![
        oracle_suite(cfg, tol, tol_scale, fault)?,
        constant_speed_suite(cfg, tol, tol_scale)?,
        fisher_suite(cfg, tol_scale)?,
        region_suite(cfg)?,
    ];
    let pass = suites.iter().all(|s| s.pass);
    Ok(ValidationReport { pass, tol_scale, integrator_tol: tol.rel, suites })
}

fn oracle_suite(cfg: &RunConfig, tol: Tolerances, scale: f64, fault: Option<Fault>) -> Result<SuiteReport> {
    let bias = match fault {
        Some(Fault::Probability) => 1e-3,
        None => 0.0,
    };
    let thetas = linspace(0.0, 2.0 * std::f64::consts::PI, 200);
    let mut worst = 0.0;
    let mut worst_case = String::new();
    for kind in SchemeKind::ALL {
        let scheme = cfg.build_scheme(kind)?;
        for &b in &[0.0, 0.25, 0.5, 1.0] {
            let det = Detuning::new(b)?;
            for &theta in &thetas {
                let closed = success_probability(&scheme, &det, theta)? + bias;
                let numeric = transition_probability_numeric(&scheme, &det, theta, Frame::Rotating, tol)?;
                let dev = (closed - numeric).abs();
                if dev > worst {
                    worst = dev;
                    worst_case = format!(
                        "scheme={kind} beta0={b} theta={theta:.6}: closed={closed:.12e} numeric={numeric:.12e}"
                    );
                }
            }
        }
    }
    Ok(SuiteReport::new("oracle-equivalence", worst, ORACLE_THRESHOLD * scale, worst_case))
}

/// Trajectories chosen to stay clear of the tan-pole metric degeneracies so
/// the span is fully integrable (the pole from θ₀ = 0 with unit velocity
/// sits at ξ = asin{√A}).
fn speed_trajectories() -> Vec<(SchemeKind, f64, f64, f64, f64)> {
    // (kind, beta0, theta0, theta_dot0, xi_end)
    let mut cases = Vec::new();
    for kind in SchemeKind::ALL {
        cases.push((kind, 0.0, 0.0, 1.0, 0.9));
        cases.push((kind, 0.5, 0.0, 1.0, 0.6));
        cases.push((kind, 1.0, 0.0, 1.0, 0.45));
        cases.push((kind, 0.5, 0.2, 0.5, 0.6));
    }
    cases.push((SchemeKind::Constant, 0.0, 0.0, 1.0, 3.0));
    cases.push((SchemeKind::Constant, 0.0, 1.0, 2.0, 2.0));
    cases.push((SchemeKind::ExponentialDecay, 0.25, 0.1, 1.5, 0.4));
    cases.push((SchemeKind::PowerLawDecay, 0.25, 0.3, 0.7, 0.8));
    cases
}

fn constant_speed_suite(cfg: &RunConfig, tol: Tolerances, scale: f64) -> Result<SuiteReport> {
    let threshold = SPEED_DRIFT_FACTOR * tol.rel;
    let mut worst = 0.0;
    let mut worst_case = String::new();
    for (kind, b, theta0, theta_dot0, xi_end) in speed_trajectories() {
        let scheme = cfg.build_scheme(kind)?;
        let det = Detuning::new(b)?;
        let traj = integrate_geodesic(&scheme, &det, theta0, theta_dot0, (0.0, xi_end), 101, tol)?;
        if let Some(halt) = &traj.halt {
            return Err(Error::invalid(format!(
                "speed suite trajectory halted unexpectedly: {kind} beta0={b} at xi={}",
                halt.state.xi
            )));
        }
        let drift = traj.max_speed_drift().unwrap_or(0.0);
        // Arc-length residual normalized by its acceptance bound scale.
        let residual = constraint_residual(&traj)?;
        let denom = traj.arc_rate().abs() * xi_end;
        let residual_rel = if denom > 0.0 { residual / denom } else { 0.0 };
        for (label, dev) in [("speed-drift", drift), ("arc-residual", residual_rel)] {
            if dev > worst {
                worst = dev;
                worst_case = format!("{label}: scheme={kind} beta0={b} theta0={theta0} span={xi_end}");
            }
        }
    }
    let _ = scale; // threshold already scales through tol.rel
    Ok(SuiteReport::new("constant-speed", worst, threshold, worst_case))
}

fn fisher_suite(cfg: &RunConfig, scale: f64) -> Result<SuiteReport> {
    let mut worst = 0.0;
    let mut worst_case = String::new();
    for kind in SchemeKind::ALL {
        let scheme = cfg.build_scheme(kind)?;
        for &b in &[0.0, 0.25, 0.5, 1.0] {
            let det = Detuning::new(b)?;
            let mut checked = 0;
            let mut i = 0;
            while checked < 1000 && i < 4000 {
                let theta = 9.0 * (i as f64 + 0.5) / 4000.0;
                i += 1;
                if sigma_unchecked(&scheme, &det, theta).cos().abs() < 1e-3
                    || scheme.envelope(theta).abs() < 1e-3
                {
                    continue;
                }
                let closed = fisher_closed(&scheme, &det, theta);
                let generic = fisher_generic(&scheme, &det, theta);
                let dev = (closed - generic).abs() / closed.abs().max(generic.abs());
                if dev > worst {
                    worst = dev;
                    worst_case =
                        format!("scheme={kind} beta0={b} theta={theta:.6}: closed={closed:.12e} generic={generic:.12e}");
                }
                checked += 1;
            }
        }
        // Exact on-resonance collapse.
        let det0 = Detuning::on_resonance();
        for i in 0..200 {
            let theta = 6.0 * i as f64 / 199.0;
            if fisher_closed(&scheme, &det0, theta) != fisher_on_resonance(&scheme, theta) {
                return Ok(SuiteReport::new(
                    "fisher-consistency",
                    f64::INFINITY,
                    FISHER_THRESHOLD * scale,
                    format!("on-resonance collapse not exact: scheme={kind} theta={theta}"),
                ));
            }
        }
    }
    Ok(SuiteReport::new("fisher-consistency", worst, FISHER_THRESHOLD * scale, worst_case))
}

fn region_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let grid = region_scan_from(cfg).run()?;
    let mut violations = 0usize;
    let mut worst_case = String::new();
    for c in grid.cells.iter().filter(|c| !c.excluded) {
        let [osc, pld, exp] = c.dominates_constant;
        let nested = (!pld || exp) && (!exp || osc);
        let ordered = c.r[2] >= c.r[3] && c.r[3] >= c.r[1];
        if !nested || !ordered {
            violations += 1;
            if worst_case.is_empty() {
                worst_case = format!(
                    "beta0={} theta0={}: nested={nested} ordered={ordered} r={:?}",
                    c.beta0, c.theta0, c.r
                );
            }
        }
    }
    if !grid.flags_consistent() {
        violations += 1;
        worst_case = "dominance flags inconsistent with stored speeds".to_string();
    }
    Ok(SuiteReport::new("region-properties", violations as f64, 0.5, worst_case))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> RunConfig {
        RunConfig { grid: Some(48), ..RunConfig::default() }
    }

    #[test]
    fn default_validation_passes() {
        let report = run_validation(&small_cfg(), 1.0, None).unwrap();
        assert!(report.pass, "{:?}", report);
        assert_eq!(report.suites.len(), 4);
        for s in &report.suites {
            assert!(s.pass, "{}: {} > {}", s.name, s.max_deviation, s.threshold);
            assert!(s.margin_factor > 2.0, "{} margin too thin: {}", s.name, s.margin_factor);
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let report = run_validation(&small_cfg(), 1.0, Some(Fault::Probability)).unwrap();
        assert!(!report.pass);
        let oracle = &report.suites[0];
        assert!(!oracle.pass);
        assert!(oracle.worst_case.contains("scheme="), "case dump present: {}", oracle.worst_case);
    }

    #[test]
    fn fault_parsing() {
        assert_eq!(Fault::parse("probability").unwrap(), Fault::Probability);
        assert!(Fault::parse("gravity").is_err());
    }
}
