//! Embedded Dormand-Prince 5(4) integrator with PI step control.
//!
//! State vectors are complex (one entry per vertex). Error control follows
//! Hairer, Norsett & Wanner's DOPRI5: mixed absolute/relative componentwise
//! scaling, a PI step-size controller, and first-same-as-last reuse of the
//! final stage. Accepted steps are reported with the derivative at both ends
//! so callers can build cubic Hermite dense output.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and step policy for the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// Relative tolerance per step (default 1e-9).
    pub rel_tol: f64,
    /// Absolute tolerance per step (default 1e-12).
    pub abs_tol: f64,
    /// Initial step size (default 1e-4).
    pub dt_init: f64,
    /// Upper bound on the step size (default unbounded).
    pub dt_max: f64,
    /// Budget of step attempts, accepted plus rejected (default 1_000_000).
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            dt_init: 1e-4,
            dt_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if !(self.dt_init > 0.0) {
            return Err(Error::invalid("dt_init must be positive"));
        }
        if self.dt_init > self.dt_max {
            return Err(Error::invalid("dt_init must not exceed dt_max"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps must be positive"));
        }
        Ok(())
    }

    /// Tighter copy for high-accuracy verification runs.
    pub fn tight() -> Self {
        IntegratorConfig { rel_tol: 1e-11, abs_tol: 1e-14, ..Default::default() }
    }
}

/// One accepted step: state and derivative at both endpoints.
pub(crate) struct AcceptedStep<'a> {
    pub t0: f64,
    pub y0: &'a [Complex64],
    pub f0: &'a [Complex64],
    pub t1: f64,
    pub y1: &'a [Complex64],
    pub f1: &'a [Complex64],
}

pub(crate) struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const PI_BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - PI_BETA * 0.75;
const FAC_MIN: f64 = 0.2; // max shrink per step
const FAC_MAX: f64 = 10.0; // max growth per step

struct StageResult {
    y1: Vec<Complex64>,
    f1: Vec<Complex64>,
    err: f64,
}

fn linear_comb(y: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) -> Vec<Complex64> {
    let mut out = y.to_vec();
    for (coef, k) in terms {
        for (o, v) in out.iter_mut().zip(*k) {
            *o += h * coef * v;
        }
    }
    out
}

/// One DOPRI5 step from (t, y) with derivative f0 = f(t, y); returns the
/// 5th-order solution, the FSAL derivative at the endpoint, and the scaled
/// error norm (accept when <= 1).
fn attempt_step<F>(f: &F, t: f64, y: &[Complex64], f0: &[Complex64], h: f64, cfg: &IntegratorConfig) -> StageResult
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
{
    let k1 = f0;
    let k2 = f(t + C2 * h, &linear_comb(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, &linear_comb(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(t + C4 * h, &linear_comb(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(t + C5 * h, &linear_comb(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f(
        t + h,
        &linear_comb(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y1 = linear_comb(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let f1 = f(t + h, &y1);

    let mut err_sq = 0.0;
    let n = y.len();
    for i in 0..n {
        let e = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * f1[i]);
        let sk_re = cfg.abs_tol + cfg.rel_tol * y[i].re.abs().max(y1[i].re.abs());
        let sk_im = cfg.abs_tol + cfg.rel_tol * y[i].im.abs().max(y1[i].im.abs());
        err_sq += (e.re / sk_re).powi(2) + (e.im / sk_im).powi(2);
    }
    let err = (err_sq / (2 * n) as f64).sqrt();
    StageResult { y1, f1, err }
}

/// One fixed step of size `h` with no error control; `h` may be negative.
/// Used for tiny finite-difference probes where the local error O(h^5) is
/// far below anything measurable.
pub(crate) fn single_step<F>(f: &F, t: f64, y: &[Complex64], h: f64) -> Vec<Complex64>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
{
    let f0 = f(t, y);
    let cfg = IntegratorConfig::default();
    attempt_step(f, t, y, &f0, h, &cfg).y1
}

/// Integrate dy/dt = f(t, y) from (t0, y0) to t_end.
///
/// `post_accept` may adjust the accepted state (returning true); the
/// endpoint derivative is then recomputed so dense output stays consistent.
/// `on_accept` sees every accepted step in order.
pub(crate) fn integrate<F, P, S>(
    f: &F,
    t0: f64,
    y0: Vec<Complex64>,
    t_end: f64,
    cfg: &IntegratorConfig,
    mut post_accept: P,
    mut on_accept: S,
) -> Result<IntegrationStats>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
    P: FnMut(&mut Vec<Complex64>) -> bool,
    S: FnMut(AcceptedStep<'_>),
{
    cfg.validate()?;
    if !(t_end > t0) {
        return Err(Error::invalid(format!("integration needs t_end > t0, got [{t0}, {t_end}]")));
    }

    let dt_floor = 1e-3 * f64::EPSILON * t_end.abs().max(t0.abs());
    let mut t = t0;
    let mut y = y0;
    let mut fy = f(t, &y);
    let mut h = cfg.dt_init.min(cfg.dt_max).min(t_end - t0);
    let mut facold: f64 = 1e-4;
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut last_rejected = false;

    while t < t_end {
        if accepted + rejected >= cfg.max_steps {
            return Err(Error::StepLimitExceeded { t, max_steps: cfg.max_steps });
        }
        if h < dt_floor {
            return Err(Error::StepUnderflow { t, dt: h });
        }
        let hitting_end = t + h >= t_end;
        if hitting_end {
            h = t_end - t;
        }

        let stage = attempt_step(f, t, &y, &fy, h, cfg);
        let err = stage.err;

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            // Accept.
            let t1 = if hitting_end { t_end } else { t + h };
            let mut y1 = stage.y1;
            let f1 = if post_accept(&mut y1) { f(t1, &y1) } else { stage.f1 };
            on_accept(AcceptedStep { t0: t, y0: &y, f0: &fy, t1, y1: &y1, f1: &f1 });
            t = t1;
            y = y1;
            fy = f1;
            accepted += 1;

            let mut fac = fac11 / facold.powf(PI_BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            facold = err.max(1e-4);
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            h = h_new.min(cfg.dt_max);
            last_rejected = false;
        } else {
            rejected += 1;
            last_rejected = true;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }

    Ok(IntegrationStats { accepted, rejected })
}
