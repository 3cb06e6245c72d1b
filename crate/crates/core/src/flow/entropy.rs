//! Entropy functional and its monotonicity-formula residual.
//!
//! rho_{x0}(X, t) = exp[ -t^(2/beta) |X(t) - x0|^2
//!                       - int_0^t (beta/2) s^(2/beta+1) |M_X X|^2 ds ]
//! is nonincreasing along the flow, with
//! d rho/dt = -(2/beta) rho t^(2/beta-1) |X - x0 + (beta/2) t M_X X|^2.
//! The residual operation compares a centered difference of rho against
//! that closed form.

use num_complex::Complex64;

use super::{velocity, FlowKind, Sample, Trajectory};
use crate::error::{Error, Result};
use crate::flow::integrator::single_step;
use crate::polygon::{norm_sq, Polygon};

/// Step for the centered difference in [`monotonicity_residual`].
pub const FD_STEP: f64 = 1e-5;

fn shifted_norm_sq(p: &Polygon, x0: Complex64) -> f64 {
    p.vertices().iter().map(|z| (z - x0).norm_sqr()).sum()
}

/// rho at a stored sample (used by the monotone audit).
pub(crate) fn rho_of_sample(s: &Sample, x0: Complex64, beta: f64) -> f64 {
    (-s.t.powf(2.0 / beta) * shifted_norm_sq(&s.polygon, x0) - s.entropy_integral).exp()
}

fn require_plain_positive_beta(traj: &Trajectory) -> Result<()> {
    if traj.beta == 0.0 {
        return Err(Error::BetaZero);
    }
    if traj.flow != FlowKind::Plain {
        return Err(Error::invalid("entropy functional is defined along the plain flow"));
    }
    Ok(())
}

/// Entropy functional rho_{x0}(X, t) evaluated along a trajectory;
/// `x0` is interpreted as the point polygon (x0, ..., x0). Equals 1 at
/// t = 0 and is nonincreasing in t.
pub fn entropy_rho(traj: &Trajectory, x0: Complex64, t: f64) -> Result<f64> {
    require_plain_positive_beta(traj)?;
    let p = traj.polygon_at(t)?;
    let integral = traj.entropy_integral_at(t)?;
    Ok((-t.powf(2.0 / traj.beta) * shifted_norm_sq(&p, x0) - integral).exp())
}

/// Outcome of checking the monotonicity formula at one time.
#[derive(Clone, Copy, Debug)]
pub struct MonotonicityCheck {
    /// Centered-difference estimate of d rho/dt.
    pub numeric: f64,
    /// Closed form -(2/beta) rho t^(2/beta-1) |X - x0 + (beta/2) t M_X X|^2.
    pub formula: f64,
    /// |numeric - formula|.
    pub residual: f64,
}

/// Compares the numeric d rho/dt against the closed form at time `t`.
///
/// The probes at t +/- h come from single fixed Runge-Kutta steps off the
/// dense-output state, so their error is far below the h^2 truncation of the
/// centered difference. For beta > 2 the closed form carries t^(2/beta-1),
/// singular at t = 0, so times below `dt_init` are refused there.
pub fn monotonicity_residual(traj: &Trajectory, x0: Complex64, t: f64) -> Result<MonotonicityCheck> {
    require_plain_positive_beta(traj)?;
    let h = FD_STEP;
    if t - h < traj.t_start() || t + h > traj.t_end() {
        return Err(Error::TimeOutOfRange {
            t,
            t_start: traj.t_start() + h,
            t_end: traj.t_end() - h,
        });
    }
    let beta = traj.beta;
    if beta > 2.0 && t < traj.config.dt_init {
        return Err(Error::invalid(format!(
            "t = {t} below dt_init = {}: t^(2/beta-1) is singular at 0 for beta > 2",
            traj.config.dt_init
        )));
    }

    let base = traj.polygon_at(t)?;
    let integral_t = traj.entropy_integral_at(t)?;
    let rho_t = (-t.powf(2.0 / beta) * shifted_norm_sq(&base, x0) - integral_t).exp();

    let rhs = |_s: f64, y: &[Complex64]| super::velocity_slice(y, beta);
    let rho_probe = |sign: f64| -> f64 {
        let y0 = base.vertices();
        let y_half = single_step(&rhs, t, y0, sign * 0.5 * h);
        let y_full = single_step(&rhs, t, y0, sign * h);
        // Simpson over [t, t + sign h] for the entropy increment.
        let g = |s: f64, y: &[Complex64]| {
            0.5 * beta * s.powf(2.0 / beta + 1.0) * norm_sq(&super::velocity_slice(y, beta))
        };
        let delta = sign * h / 6.0
            * (g(t, y0) + 4.0 * g(t + sign * 0.5 * h, &y_half) + g(t + sign * h, &y_full));
        let s1 = t + sign * h;
        let dist_sq: f64 = y_full.iter().map(|z| (z - x0).norm_sqr()).sum();
        (-s1.powf(2.0 / beta) * dist_sq - (integral_t + delta)).exp()
    };
    let numeric = (rho_probe(1.0) - rho_probe(-1.0)) / (2.0 * h);

    let v = velocity(&base, beta);
    let bracket_sq: f64 = base
        .vertices()
        .iter()
        .zip(&v)
        .map(|(z, mv)| (z - x0 + 0.5 * beta * t * mv).norm_sqr())
        .sum();
    let formula = -(2.0 / beta) * rho_t * t.powf(2.0 / beta - 1.0) * bracket_sq;

    Ok(MonotonicityCheck { numeric, formula, residual: (numeric - formula).abs() })
}
