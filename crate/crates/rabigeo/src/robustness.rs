//! Initial geodesic speeds on and off resonance, robustness coefficients,
//! and the (β₀, θ₀) dominance-region scanner.
//!
//! The closed forms here are one of two independent code paths: the other is
//! ½√F·θ' through [`crate::geodesic::geodesic_speed`]. Tests pin the two
//! paths together to a couple of ulp.

use crate::error::{ensure_finite, Error, Result};
use crate::fisher::offres_bracket;
use crate::schemes::{Detuning, DrivingScheme, SchemeKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Initial speeds of one scheme at one (β₀, θ₀) with their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPair {
    pub v_on: f64,
    pub v_off: f64,
    /// `None` where v_on vanishes (oscillatory envelope zeros).
    pub r: Option<f64>,
}

impl SpeedPair {
    pub fn compute(scheme: &DrivingScheme, det: &Detuning, theta0: f64, theta_dot0: f64) -> Self {
        SpeedPair {
            v_on: v_on(scheme, theta0, theta_dot0),
            v_off: v_off(scheme, det, theta0, theta_dot0),
            r: robustness_coefficient(scheme, det, theta0),
        }
    }
}

/// Envelope magnitudes below this make the speed ratio undefined.
const V_ON_ZERO_EPS: f64 = 1e-12;

/// On-resonance initial speed: (Γ/ħ) |envelope(θ₀)| |θ'₀|.
pub fn v_on(scheme: &DrivingScheme, theta0: f64, theta_dot0: f64) -> f64 {
    scheme.gamma_rate() * scheme.envelope(theta0).abs() * theta_dot0.abs()
}

/// Off-resonance initial speed from the closed form:
/// (Γ/ħ) |envelope| √bracket |θ'₀| with the scheme's off-resonance bracket.
///
/// Collapses bit-exactly to [`v_on`] at β₀ = 0 and agrees to the bit with
/// ½√F·θ' through the closed Fisher form.
pub fn v_off(scheme: &DrivingScheme, det: &Detuning, theta0: f64, theta_dot0: f64) -> f64 {
    if det.amp_factor() == 1.0 {
        return v_on(scheme, theta0, theta_dot0);
    }
    let envelope_speed = scheme.gamma_rate() * scheme.envelope(theta0).abs();
    envelope_speed * offres_bracket(scheme, det, theta0).sqrt() * theta_dot0.abs()
}

/// Robustness coefficient r = v_off/v_on via the closed forms (θ'₀ and Γ/ħ
/// cancel). `None` where v_on = 0 and the ratio is undefined.
pub fn robustness_coefficient(scheme: &DrivingScheme, det: &Detuning, theta0: f64) -> Option<f64> {
    if scheme.envelope(theta0).abs() < V_ON_ZERO_EPS {
        return None;
    }
    if det.amp_factor() == 1.0 {
        return Some(1.0);
    }
    Some(offres_bracket(scheme, det, theta0).sqrt())
}

/// Largest β₀ whose maximum success probability A(β₀) still reaches `p_min`.
pub fn beta0_bound_for_fidelity(p_min: f64) -> Result<f64> {
    ensure_finite("p_min", p_min)?;
    if !(p_min > 0.0 && p_min <= 1.0) {
        return Err(Error::invalid(format!("p_min must lie in (0, 1], got {p_min}")));
    }
    Ok((1.0 / p_min - 1.0).sqrt())
}

/// Scan configuration; defaults match the standard figure settings
/// (Γ/ħ = 1, λ = 2/π, θ'₀ = 1, p_min = 25/26).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionScan {
    pub gamma_rate: f64,
    pub lambda: f64,
    pub theta_dot0: f64,
    /// Fidelity floor; the β₀ axis is clipped to keep A(β₀) ≥ p_min.
    pub p_min: f64,
    pub beta0_range: (f64, f64),
    pub theta0_range: (f64, f64),
    /// (β₀ cells, θ₀ cells).
    pub resolution: (usize, usize),
}

impl Default for RegionScan {
    fn default() -> Self {
        RegionScan {
            gamma_rate: 1.0,
            lambda: 2.0 / std::f64::consts::PI,
            theta_dot0: 1.0,
            p_min: 25.0 / 26.0,
            beta0_range: (0.0, 0.2),
            theta0_range: (0.0, 2.0),
            resolution: (200, 200),
        }
    }
}

/// Scheme order used in every per-cell array.
pub const SCHEME_ORDER: [SchemeKind; 4] = SchemeKind::ALL;

/// One grid cell: raw speeds and ratios for all four schemes plus the
/// dominance flags of the three non-constant schemes against constant.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegionCell {
    pub beta0: f64,
    pub theta0: f64,
    /// v_off per scheme in [`SCHEME_ORDER`].
    pub v_off: [f64; 4],
    /// r per scheme in [`SCHEME_ORDER`]; NaN where undefined.
    pub r: [f64; 4],
    /// Dominance over constant for [oscillatory, powerlaw, exponential]:
    /// v_off ≥ v_off(constant) and r ≥ r(constant), non-strict.
    pub dominates_constant: [bool; 3],
    /// True when any ratio in the cell is undefined; such cells carry no flags.
    pub excluded: bool,
}

/// Classified (β₀, θ₀) grid with all raw values retained.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionGrid {
    pub beta0_axis: Vec<f64>,
    pub theta0_axis: Vec<f64>,
    /// Row-major over (β₀, θ₀): `cells[ib * theta0_axis.len() + it]`.
    pub cells: Vec<RegionCell>,
}

impl RegionScan {
    /// Run the scan. Cells are independent pure evaluations computed in
    /// parallel and merged in deterministic row-major order.
    pub fn run(&self) -> Result<RegionGrid> {
        let (nb, nt) = self.resolution;
        if nb < 2 || nt < 2 {
            return Err(Error::invalid("region resolution must be at least 2x2".to_string()));
        }
        let bound = beta0_bound_for_fidelity(self.p_min)?;
        let b_lo = self.beta0_range.0.max(0.0);
        let b_hi = self.beta0_range.1.min(bound);
        if !(b_hi >= b_lo) || !(self.theta0_range.1 >= self.theta0_range.0) {
            return Err(Error::invalid("region ranges must be nonempty".to_string()));
        }
        if self.theta0_range.0 < 0.0 {
            return Err(Error::invalid("theta0 range must be nonnegative".to_string()));
        }
        let schemes: Vec<DrivingScheme> = SCHEME_ORDER
            .iter()
            .map(|&k| DrivingScheme::new(k, self.gamma_rate, self.lambda))
            .collect::<Result<_>>()?;
        let beta0_axis = crate::grid::linspace(b_lo, b_hi, nb);
        let theta0_axis = crate::grid::linspace(self.theta0_range.0, self.theta0_range.1, nt);
        let theta_dot0 = self.theta_dot0;

        let cells: Vec<RegionCell> = beta0_axis
            .par_iter()
            .flat_map_iter(|&beta0| {
                let det = Detuning::new(beta0).expect("axis values are validated");
                let schemes = schemes.clone();
                theta0_axis.iter().map(move |&theta0| {
                    let mut v_off_arr = [0.0; 4];
                    let mut r_arr = [f64::NAN; 4];
                    let mut excluded = false;
                    for (i, s) in schemes.iter().enumerate() {
                        v_off_arr[i] = v_off(s, &det, theta0, theta_dot0);
                        match robustness_coefficient(s, &det, theta0) {
                            Some(r) => r_arr[i] = r,
                            None => excluded = true,
                        }
                    }
                    let mut flags = [false; 3];
                    if !excluded {
                        for i in 1..4 {
                            flags[i - 1] = v_off_arr[i] >= v_off_arr[0] && r_arr[i] >= r_arr[0];
                        }
                    }
                    RegionCell {
                        beta0,
                        theta0,
                        v_off: v_off_arr,
                        r: r_arr,
                        dominates_constant: flags,
                        excluded,
                    }
                })
            })
            .collect();

        Ok(RegionGrid { beta0_axis, theta0_axis, cells })
    }
}

impl RegionGrid {
    /// Per-cell region nesting: powerlaw ⇒ exponential ⇒ oscillatory.
    pub fn nesting_holds(&self) -> bool {
        self.cells.iter().filter(|c| !c.excluded).all(|c| {
            let [osc, pld, exp] = c.dominates_constant;
            (!pld || exp) && (!exp || osc)
        })
    }

    /// r(powerlaw) ≥ r(exponential) ≥ r(oscillatory) on non-excluded cells.
    pub fn robustness_ordering_holds(&self) -> bool {
        self.cells
            .iter()
            .filter(|c| !c.excluded)
            .all(|c| c.r[2] >= c.r[3] && c.r[3] >= c.r[1])
    }

    /// Flags follow from the stored speeds and ratios on every cell.
    pub fn flags_consistent(&self) -> bool {
        self.cells.iter().all(|c| {
            if c.excluded {
                return c.dominates_constant == [false; 3];
            }
            (1..4).all(|i| {
                c.dominates_constant[i - 1] == (c.v_off[i] >= c.v_off[0] && c.r[i] >= c.r[0])
            })
        })
    }

    /// CSV: one row per cell with full double precision.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "beta0,theta0,v_off_constant,v_off_oscillatory,v_off_powerlaw,v_off_exponential,\
             r_constant,r_oscillatory,r_powerlaw,r_exponential,\
             dom_oscillatory,dom_powerlaw,dom_exponential,excluded"
        )?;
        for c in &self.cells {
            write!(w, "{:.16e},{:.16e}", c.beta0, c.theta0)?;
            for v in c.v_off {
                write!(w, ",{v:.16e}")?;
            }
            for r in c.r {
                write!(w, ",{r:.16e}")?;
            }
            for d in c.dominates_constant {
                write!(w, ",{}", d as u8)?;
            }
            writeln!(w, ",{}", c.excluded as u8)?;
        }
        Ok(())
    }
}
