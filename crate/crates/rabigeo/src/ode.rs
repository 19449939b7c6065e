//! Dormand-Prince 5(4) initial-value solver with dense output.
//!
//! One embedded Runge-Kutta core serves both the geodesic equation and the
//! amplitude evolution, so a single set of step-control and interpolation
//! tests covers every integration in the crate.
//!
//! The right-hand side is fallible: a guard inside the RHS (for example the
//! tan-pole guard of the geodesic equation) returns an [`Error`] and the
//! solver first retries with smaller steps, then reports a structured
//! [`Stop`] carrying the last accepted state instead of stepping across.

use crate::error::{Error, Result};

/// Absolute step floor; below this the solver reports [`Stop::StepUnderflow`].
pub const H_MIN: f64 = 1e-14;

/// Integration tolerances (per-component error weight `abs + rel * |y|`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { abs: 1e-10, rel: 1e-10 }
    }
}

impl Tolerances {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerances { abs, rel }
    }

    /// Same value for the absolute and relative parts.
    pub fn uniform(tol: f64) -> Self {
        Tolerances { abs: tol, rel: tol }
    }
}

/// Why an integration ended before reaching the end of the span.
#[derive(Debug)]
pub enum Stop {
    /// The RHS refused evaluation even at the smallest admissible step.
    Rhs { t: f64, error: Error },
    /// Step size fell below [`H_MIN`] (solution leaving the representable range).
    StepUnderflow { t: f64, h: f64 },
    /// Step budget exhausted.
    MaxSteps { t: f64 },
}

impl Stop {
    /// Position of the last accepted state when the stop occurred.
    pub fn t(&self) -> f64 {
        match self {
            Stop::Rhs { t, .. } | Stop::StepUnderflow { t, .. } | Stop::MaxSteps { t } => *t,
        }
    }

    /// Convert into the underlying error, synthesizing one for non-RHS stops.
    pub fn into_error(self) -> Error {
        match self {
            Stop::Rhs { error, .. } => error,
            Stop::StepUnderflow { t, h } => Error::StepUnderflow { t, h },
            Stop::MaxSteps { t } => Error::MaxSteps { t, max_steps: MAX_STEPS },
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug)]
pub struct Solution<const N: usize> {
    /// Requested sample positions that were reached.
    pub t: Vec<f64>,
    /// Dense-output states at `t`.
    pub y: Vec<[f64; N]>,
    /// Last accepted position.
    pub t_end: f64,
    /// Last accepted state.
    pub y_end: [f64; N],
    pub n_accepted: usize,
    pub n_rejected: usize,
    pub n_rhs_evals: usize,
    /// `None` when the full span was covered.
    pub stop: Option<Stop>,
}

impl<const N: usize> Solution<N> {
    pub fn completed(&self) -> bool {
        self.stop.is_none()
    }
}

const MAX_STEPS: usize = 200_000;
const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_GROW: f64 = 10.0; // max step growth per accept
const FAC_SHRINK: f64 = 5.0; // max step shrink per reject

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, coeffs: &[f64], k: &[[f64; N]]) -> [f64; N] {
    let mut out = *y;
    for (c, kj) in coeffs.iter().zip(k.iter()) {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * kj[i];
            }
        }
    }
    out
}

fn finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// State of one accepted step, enough to interpolate anywhere inside it.
struct DenseSegment<const N: usize> {
    t0: f64,
    h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let s = if self.h == 0.0 { 0.0 } else { (t - self.t0) / self.h };
        let s1 = 1.0 - s;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = self.cont[0][i]
                + s * (self.cont[1][i]
                    + s1 * (self.cont[2][i] + s * (self.cont[3][i] + s1 * self.cont[4][i])));
        }
        out
    }
}

/// Integrate `dy/dt = rhs(t, y)` over `t_span`, sampling at `t_eval`.
///
/// `t_eval` must be ascending and contained in the (forward) span. If the
/// integration halts early, samples collected so far are kept and `stop`
/// records why; callers decide whether a halt is an error.
pub fn solve<const N: usize, F>(
    mut rhs: F,
    t_span: (f64, f64),
    y0: [f64; N],
    t_eval: &[f64],
    tol: Tolerances,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let (t0, tf) = t_span;
    if !(t0.is_finite() && tf.is_finite()) || tf <= t0 {
        return Err(Error::invalid(format!("integration span must be finite with tf > t0, got [{t0}, {tf}]")));
    }
    if !finite(&y0) {
        return Err(Error::invalid("initial state must be finite".to_string()));
    }
    if !(tol.abs > 0.0 && tol.rel > 0.0) {
        return Err(Error::invalid("tolerances must be positive".to_string()));
    }
    for w in t_eval.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::invalid("t_eval must be strictly ascending".to_string()));
        }
    }
    if let (Some(first), Some(last)) = (t_eval.first(), t_eval.last()) {
        if *first < t0 || *last > tf {
            return Err(Error::invalid(format!("t_eval must lie within [{t0}, {tf}]")));
        }
    }

    let mut sol = Solution {
        t: Vec::with_capacity(t_eval.len()),
        y: Vec::with_capacity(t_eval.len()),
        t_end: t0,
        y_end: y0,
        n_accepted: 0,
        n_rejected: 0,
        n_rhs_evals: 0,
        stop: None,
    };
    let mut eval_idx = 0;
    // Samples at exactly t0 need no integration.
    while eval_idx < t_eval.len() && t_eval[eval_idx] <= t0 {
        sol.t.push(t_eval[eval_idx]);
        sol.y.push(y0);
        eval_idx += 1;
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = match rhs(t, &y) {
        Ok(v) => v,
        Err(error) => {
            sol.stop = Some(Stop::Rhs { t, error });
            return Ok(sol);
        }
    };
    sol.n_rhs_evals += 1;

    let mut h = initial_step(&mut rhs, t, tf, &y, &k1, tol, &mut sol.n_rhs_evals);
    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;

    loop {
        if t >= tf {
            break;
        }
        if sol.n_accepted + sol.n_rejected >= MAX_STEPS {
            sol.stop = Some(Stop::MaxSteps { t });
            break;
        }
        if h < H_MIN {
            sol.stop = Some(Stop::StepUnderflow { t, h });
            break;
        }
        if t + h > tf {
            h = tf - t;
        }

        // Stages 2..7; k7 is the FSAL derivative at the trial endpoint.
        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        let mut stage_err: Option<Error> = None;
        for j in 1..7 {
            let yj = axpy(&y, h, &A[j][..j], &k[..j]);
            if !finite(&yj) {
                stage_err = Some(Error::invalid("non-finite stage state".to_string()));
                break;
            }
            match rhs(t + C[j] * h, &yj) {
                Ok(v) => k[j] = v,
                Err(e) => {
                    stage_err = Some(e);
                    break;
                }
            }
            sol.n_rhs_evals += 1;
        }
        if let Some(error) = stage_err {
            // A trial stage may overshoot into a guarded region; retry smaller
            // before accepting that the singularity is genuinely ahead.
            if h > 16.0 * H_MIN {
                h *= 0.25;
                sol.n_rejected += 1;
                last_rejected = true;
                continue;
            }
            sol.stop = Some(Stop::Rhs { t, error });
            break;
        }

        let y_new = axpy(&y, h, &B[..6], &k[..6]);
        let err_norm = {
            let mut acc = 0.0;
            for i in 0..N {
                let sk = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
                let mut e = 0.0;
                for (l, el) in E.iter().enumerate() {
                    e += el * k[l][i];
                }
                let r = h * e / sk;
                acc += r * r;
            }
            (acc / N as f64).sqrt()
        };

        if !err_norm.is_finite() || !finite(&y_new) {
            h *= 0.25;
            sol.n_rejected += 1;
            last_rejected = true;
            continue;
        }

        let fac11 = err_norm.powf(EXPO1);
        if err_norm <= 1.0 {
            // Accepted. Lund stabilization uses the previous accepted error.
            let mut fac = fac11 / facold.powf(BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_GROW, FAC_SHRINK);
            let mut h_next = h / fac;
            facold = err_norm.max(1e-4);

            let t_new = t + h;
            let mut ydiff = [0.0; N];
            let mut bspl = [0.0; N];
            let mut dsum = [0.0; N];
            for i in 0..N {
                ydiff[i] = y_new[i] - y[i];
                bspl[i] = h * k[0][i] - ydiff[i];
                let mut d = 0.0;
                for (l, dl) in D.iter().enumerate() {
                    d += dl * k[l][i];
                }
                dsum[i] = h * d;
            }
            let mut cont3 = [0.0; N];
            for i in 0..N {
                cont3[i] = ydiff[i] - h * k[6][i] - bspl[i];
            }
            let seg = DenseSegment { t0: t, h, cont: [y, ydiff, bspl, cont3, dsum] };
            while eval_idx < t_eval.len() && t_eval[eval_idx] <= t_new {
                sol.t.push(t_eval[eval_idx]);
                sol.y.push(seg.eval(t_eval[eval_idx]));
                eval_idx += 1;
            }

            k1 = k[6];
            t = t_new;
            y = y_new;
            sol.t_end = t;
            sol.y_end = y;
            sol.n_accepted += 1;
            if last_rejected {
                h_next = h_next.min(h);
                last_rejected = false;
            }
            h = h_next;
        } else {
            h /= (fac11 / SAFETY).min(FAC_SHRINK);
            sol.n_rejected += 1;
            last_rejected = true;
        }
    }

    Ok(sol)
}

/// Hairer-style starting step estimate.
fn initial_step<const N: usize, F>(
    rhs: &mut F,
    t0: f64,
    tf: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    tol: Tolerances,
    evals: &mut usize,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let span = tf - t0;
    let sk = |i: usize| tol.abs + tol.rel * y0[i].abs();
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        d0 += (y0[i] / sk(i)).powi(2);
        d1 += (f0[i] / sk(i)).powi(2);
    }
    d0 = (d0 / N as f64).sqrt();
    d1 = (d1 / N as f64).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 }.min(span);

    let mut y1 = *y0;
    for i in 0..N {
        y1[i] += h0 * f0[i];
    }
    let f1 = match rhs(t0 + h0, &y1) {
        Ok(v) => {
            *evals += 1;
            v
        }
        Err(_) => return (h0 * 1e-2).max(H_MIN * 16.0),
    };
    let mut d2 = 0.0;
    for i in 0..N {
        d2 += ((f1[i] - f0[i]) / sk(i)).powi(2);
    }
    d2 = (d2 / N as f64).sqrt() / h0;

    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / dm).powf(0.2) };
    h1.min(100.0 * h0).min(span)
}

/// Integrate with `n_steps` equal steps of the same RK core, no adaptivity.
///
/// Exists so tests can measure the raw convergence order of the method.
pub fn solve_fixed<const N: usize, F>(
    mut rhs: F,
    t_span: (f64, f64),
    y0: [f64; N],
    n_steps: usize,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let (t0, tf) = t_span;
    if n_steps == 0 || tf <= t0 {
        return Err(Error::invalid("fixed-step solve needs n_steps > 0 and tf > t0".to_string()));
    }
    let h = (tf - t0) / n_steps as f64;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y)?;
    for step in 0..n_steps {
        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        for j in 1..7 {
            let yj = axpy(&y, h, &A[j][..j], &k[..j]);
            k[j] = rhs(t + C[j] * h, &yj)?;
        }
        y = axpy(&y, h, &B[..6], &k[..6]);
        t = t0 + (step + 1) as f64 * h;
        k1 = k[6];
    }
    Ok(y)
}
