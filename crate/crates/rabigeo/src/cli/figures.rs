//! Deterministic CSV emitters for the five standard figures.
//!
//! Identical configuration yields byte-identical output: floats are printed
//! with 17 significant digits and every iteration order is fixed.

use super::config::RunConfig;
use crate::defaults;
use crate::error::Result;
use crate::geodesic::{integrate_geodesic, numeric_initial_speed, GeodesicTrajectory};
use crate::grid::linspace;
use crate::robustness::{robustness_coefficient, v_off, v_on, RegionScan};
use crate::schemes::{success_probability, Detuning, DrivingScheme};
use std::io::Write as _;

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Default off-resonance panel detuning unless the user listed detunings.
fn off_beta0(cfg: &RunConfig, beta0_explicit: bool) -> f64 {
    if beta0_explicit {
        cfg.beta0_scalar()
    } else {
        defaults::BETA0_OFF
    }
}

/// Success probability p₀(θ) for the selected scheme, one column per β₀,
/// θ ∈ [0, 4π].
pub fn emit_fig1(cfg: &RunConfig) -> Result<Vec<u8>> {
    let scheme = cfg.build_scheme(cfg.scheme_kind()?)?;
    let dets: Vec<Detuning> = cfg.beta0.iter().map(|&b| Detuning::new(b)).collect::<Result<_>>()?;
    let thetas = linspace(0.0, defaults::FIG1_THETA_MAX, cfg.samples_or(defaults::FIG1_POINTS));
    let mut out = Vec::new();
    write!(out, "theta")?;
    for b in &cfg.beta0 {
        write!(out, ",p0_beta0_{b}")?;
    }
    writeln!(out)?;
    for &theta in &thetas {
        write!(out, "{}", fmt(theta))?;
        for det in &dets {
            write!(out, ",{}", fmt(success_probability(&scheme, det, theta)?))?;
        }
        writeln!(out)?;
    }
    Ok(out)
}

/// Geodesic paths θ(ξ) for all four schemes, one panel per detuning
/// (default panels β₀ = 0 and β₀ = 1/2). Trajectories that hit a metric
/// singularity are truncated: cells past the halt stay empty and a comment
/// records the halt position.
pub fn emit_fig2(cfg: &RunConfig, beta0_explicit: bool) -> Result<Vec<u8>> {
    let panels: Vec<f64> =
        if beta0_explicit { cfg.beta0.clone() } else { vec![0.0, defaults::BETA0_OFF] };
    let schemes = cfg.all_schemes()?;
    let n = cfg.samples_or(defaults::FIG2_POINTS);
    let xi = linspace(cfg.xi_span.0, cfg.xi_span.1, n);

    let mut trajectories: Vec<(f64, &DrivingScheme, GeodesicTrajectory)> = Vec::new();
    for &b in &panels {
        let det = Detuning::new(b)?;
        for scheme in &schemes {
            let traj = integrate_geodesic(
                scheme,
                &det,
                cfg.theta0,
                cfg.theta_dot0,
                cfg.xi_span,
                n,
                cfg.tolerances(),
            )?;
            trajectories.push((b, scheme, traj));
        }
    }

    let mut out = Vec::new();
    for (b, scheme, traj) in &trajectories {
        if let Some(halt) = &traj.halt {
            writeln!(
                out,
                "# truncated: scheme={} beta0={b} xi={} theta={} ({})",
                scheme.kind(),
                fmt(halt.state.xi),
                fmt(halt.state.theta),
                halt.error
            )?;
        }
    }
    write!(out, "xi")?;
    for (b, scheme, _) in &trajectories {
        write!(out, ",theta_{}_beta0_{b}", scheme.kind())?;
    }
    writeln!(out)?;
    for (i, &x) in xi.iter().enumerate() {
        write!(out, "{}", fmt(x))?;
        for (_, _, traj) in &trajectories {
            match traj.samples().get(i) {
                Some(s) => write!(out, ",{}", fmt(s.theta))?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    Ok(out)
}

/// Off-resonance initial speed of the selected scheme versus θ₀: the closed
/// form next to the speed measured on a short integrated geodesic arc.
pub fn emit_fig3(cfg: &RunConfig, beta0_explicit: bool) -> Result<Vec<u8>> {
    let scheme = cfg.build_scheme(cfg.scheme_kind()?)?;
    let det = Detuning::new(off_beta0(cfg, beta0_explicit))?;
    let thetas = linspace(0.0, defaults::FIG3_THETA0_MAX, cfg.samples_or(defaults::FIG3_POINTS));
    let mut out = Vec::new();
    writeln!(out, "theta0,v_off_analytic,v_off_numeric")?;
    for &theta0 in &thetas {
        let analytic = v_off(&scheme, &det, theta0, cfg.theta_dot0);
        let numeric =
            numeric_initial_speed(&scheme, &det, theta0, cfg.tolerances())? * cfg.theta_dot0.abs();
        writeln!(out, "{},{},{}", fmt(theta0), fmt(analytic), fmt(numeric))?;
    }
    Ok(out)
}

/// Three tables: v_on(θ₀) per scheme, v_off(θ₀) per scheme, r(θ₀) per scheme.
pub fn emit_fig4(cfg: &RunConfig, beta0_explicit: bool) -> Result<Vec<(String, Vec<u8>)>> {
    let schemes = cfg.all_schemes()?;
    let det = Detuning::new(off_beta0(cfg, beta0_explicit))?;
    let thetas = linspace(0.0, defaults::FIG3_THETA0_MAX, cfg.samples_or(defaults::FIG4_POINTS));

    let mut von = Vec::new();
    write!(von, "theta0")?;
    for s in &schemes {
        write!(von, ",v_on_{}", s.kind())?;
    }
    writeln!(von)?;
    for &t0 in &thetas {
        write!(von, "{}", fmt(t0))?;
        for s in &schemes {
            write!(von, ",{}", fmt(v_on(s, t0, cfg.theta_dot0)))?;
        }
        writeln!(von)?;
    }

    let mut voff = Vec::new();
    write!(voff, "theta0")?;
    for s in &schemes {
        write!(voff, ",v_off_{}", s.kind())?;
    }
    writeln!(voff)?;
    for &t0 in &thetas {
        write!(voff, "{}", fmt(t0))?;
        for s in &schemes {
            write!(voff, ",{}", fmt(v_off(s, &det, t0, cfg.theta_dot0)))?;
        }
        writeln!(voff)?;
    }

    let mut r = Vec::new();
    writeln!(r, "# r is a function of (beta0, theta0); theta0 doubles as the affine-parameter axis")?;
    write!(r, "theta0")?;
    for s in &schemes {
        write!(r, ",r_{}", s.kind())?;
    }
    writeln!(r)?;
    for &t0 in &thetas {
        write!(r, "{}", fmt(t0))?;
        for s in &schemes {
            let val = robustness_coefficient(s, &det, t0).unwrap_or(f64::NAN);
            write!(r, ",{}", fmt(val))?;
        }
        writeln!(r)?;
    }

    Ok(vec![("von".to_string(), von), ("voff".to_string(), voff), ("r".to_string(), r)])
}

/// Dominance-region grid as CSV.
pub fn emit_fig5(cfg: &RunConfig) -> Result<Vec<u8>> {
    let grid = region_scan_from(cfg).run()?;
    let mut out = Vec::new();
    grid.to_csv(&mut out)?;
    Ok(out)
}

/// Dominance-region grid as JSON.
pub fn emit_fig5_json(cfg: &RunConfig) -> Result<Vec<u8>> {
    let grid = region_scan_from(cfg).run()?;
    Ok(serde_json::to_vec_pretty(&grid)?)
}

pub fn region_scan_from(cfg: &RunConfig) -> RegionScan {
    let res = cfg.samples_or(defaults::REGION_RESOLUTION);
    RegionScan {
        gamma_rate: cfg.gamma_rate,
        lambda: cfg.lambda,
        theta_dot0: cfg.theta_dot0,
        p_min: cfg.p_min,
        beta0_range: (0.0, f64::INFINITY), // clipped to the fidelity bound
        theta0_range: cfg.theta0_range,
        resolution: (res, res),
    }
}

/// Minimal gnuplot companion for an emitted CSV.
pub fn gnuplot_stub(csv_name: &str) -> String {
    format!(
        "set datafile separator ','\nset key autotitle columnhead\nplot '{csv_name}' using 1:2 with lines\n"
    )
}
