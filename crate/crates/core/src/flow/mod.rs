//! Time integration of the polygon flow and its rescaled variant.
//!
//! The flow moves each vertex toward its neighbors with edge-length-power
//! weights: dX_j/dt = l_j^beta (X_{j+1} - X_j) + l_{j-1}^beta (X_{j-1} - X_j),
//! i.e. dX/dt = M_X X with the weighted cycle Laplacian M_X. Polygons
//! shrink to their center of mass; dividing out the self-similar scale a(t)
//! and reparametrizing time turns the regular polygon into an equilibrium
//! of an autonomous rescaled system.
//!
//! Trajectories keep the state and derivative of every accepted step, which
//! gives cubic Hermite dense output, and accumulate the entropy integral
//! per step with Simpson quadrature on the interpolant.

mod entropy;
mod integrator;

pub use entropy::{entropy_rho, monotonicity_residual, MonotonicityCheck, FD_STEP};
pub use integrator::IntegratorConfig;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laplacian::laplacian;
use crate::polygon::{norm_sq, p_norm_slice, Polygon};
use crate::rng::Lcg64;

/// |sin theta| below this is treated as collinear where a derivation divides
/// by sin theta.
pub const COLLINEAR_SIN_TOL: f64 = 1e-10;

/// Initial center-of-mass magnitude (relative to polygon size) below which
/// the rescaled flow is integrated on the mean-zero invariant subspace.
pub const PIN_CENTER_REL_TOL: f64 = 1e-9;

/// Which system a trajectory integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowKind {
    /// dX/dt = M_X X.
    Plain,
    /// dY/dtau = -lambda_1 Y + l^-beta M_Y Y with l, lambda_1 of the regular N-gon.
    Rescaled,
}

/// Edge length and first Laplacian eigenvalue of the regular N-gon P_1:
/// l = 2 sin(pi/N), lambda_1 = -4 sin^2(pi/N).
pub fn regular_constants(n: usize) -> (f64, f64) {
    let s = (PI / n as f64).sin();
    (2.0 * s, -4.0 * s * s)
}

/// Flow velocity M_X X; component j is l_j^beta (X_{j+1} - X_j)
/// + l_{j-1}^beta (X_{j-1} - X_j). Point polygons are fixed: zero velocity.
pub fn velocity(p: &Polygon, beta: f64) -> Vec<Complex64> {
    laplacian(p, beta).apply(p.vertices())
}

fn velocity_slice(x: &[Complex64], beta: f64) -> Vec<Complex64> {
    let n = x.len();
    let weights: Vec<f64> = (0..n).map(|j| (x[(j + 1) % n] - x[j]).norm().powf(beta)).collect();
    (0..n)
        .map(|j| {
            let next = (j + 1) % n;
            let prev = (j + n - 1) % n;
            weights[j] * (x[next] - x[j]) + weights[prev] * (x[prev] - x[j])
        })
        .collect()
}

/// Velocity of the rescaled system: -lambda_1 Y + l^-beta M_Y Y, with
/// l and lambda_1 the constants of the regular N-gon (same N as `y`).
/// The regular polygon P_1 is an equilibrium; the center of mass obeys
/// dq/dtau = -lambda_1 q, so it is an unstable mode unless q = 0.
pub fn rescaled_velocity(y: &Polygon, beta: f64) -> Vec<Complex64> {
    let (l, lambda_1) = regular_constants(y.n());
    rescaled_velocity_slice(y.vertices(), beta, l.powf(beta), lambda_1)
}

fn rescaled_velocity_slice(y: &[Complex64], beta: f64, l_pow_beta: f64, lambda_1: f64) -> Vec<Complex64> {
    let mut v = velocity_slice(y, beta);
    for (vj, yj) in v.iter_mut().zip(y) {
        *vj = *vj / l_pow_beta - lambda_1 * yj;
    }
    v
}

/// Scale factor of the self-similar solution a(t) P_k:
/// a(t) = (1 - beta l^beta lambda_k t)^(-1/beta), a(0) = 1, decreasing to 0.
pub fn self_similar_scale(t: f64, beta: f64, l: f64, lambda_k: f64) -> f64 {
    (1.0 - beta * l.powf(beta) * lambda_k * t).powf(-1.0 / beta)
}

/// Time change to the autonomous rescaled system:
/// tau = ln(1 - beta l^beta lambda_1 t) / (-beta lambda_1).
pub fn tau_of_t(t: f64, beta: f64, l: f64, lambda_1: f64) -> f64 {
    (1.0 - beta * l.powf(beta) * lambda_1 * t).ln() / (-beta * lambda_1)
}

/// Inverse of [`tau_of_t`]; round-trips to ~1e-12 relative.
pub fn t_of_tau(tau: f64, beta: f64, l: f64, lambda_1: f64) -> f64 {
    (1.0 - (-beta * lambda_1 * tau).exp()) / (beta * l.powf(beta) * lambda_1)
}

/// One accepted integration sample with per-sample diagnostics.
#[derive(Clone, Debug)]
pub struct Sample {
    pub t: f64,
    pub polygon: Polygon,
    /// Flow velocity at (t, polygon), used for Hermite dense output.
    pub velocity: Vec<Complex64>,
    /// Running entropy integral: int_0^t (beta/2) s^(2/beta+1) |M_X X|^2 ds
    /// (plain flow with beta > 0; zero otherwise).
    pub entropy_integral: f64,
    /// Energy F_{beta+2}.
    pub energy: f64,
    /// min_j sin^2 theta_j, `None` when some angle is undefined.
    pub min_sin_sq: Option<f64>,
    pub center_of_mass: Complex64,
}

/// Time-stamped polygon states plus running entropy integral.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub beta: f64,
    pub flow: FlowKind,
    pub config: IntegratorConfig,
    samples: Vec<Sample>,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pin_center: bool,
}

impl Trajectory {
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always has samples")
    }

    pub fn t_start(&self) -> f64 {
        self.first().t
    }

    pub fn t_end(&self) -> f64 {
        self.last().t
    }

    pub fn n(&self) -> usize {
        self.first().polygon.n()
    }

    fn bracket(&self, t: f64) -> Result<usize> {
        if !(t >= self.t_start() && t <= self.t_end()) || !t.is_finite() {
            return Err(Error::TimeOutOfRange { t, t_start: self.t_start(), t_end: self.t_end() });
        }
        // Index of the last sample with sample.t <= t (and < len-1).
        let idx = self.samples.partition_point(|s| s.t <= t);
        Ok(idx.saturating_sub(1).min(self.samples.len() - 2))
    }

    fn hermite(&self, i: usize, t: f64) -> Vec<Complex64> {
        let (s0, s1) = (&self.samples[i], &self.samples[i + 1]);
        let h = s1.t - s0.t;
        let u = (t - s0.t) / h;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        (0..s0.polygon.n())
            .map(|j| {
                h00 * s0.polygon.vertices()[j]
                    + h10 * h * s0.velocity[j]
                    + h01 * s1.polygon.vertices()[j]
                    + h11 * h * s1.velocity[j]
            })
            .collect()
    }

    /// Dense output: cubic Hermite interpolation between accepted steps.
    pub fn polygon_at(&self, t: f64) -> Result<Polygon> {
        let i = self.bracket(t)?;
        if t == self.samples[i].t {
            return Ok(self.samples[i].polygon.clone());
        }
        if t == self.samples[i + 1].t {
            return Ok(self.samples[i + 1].polygon.clone());
        }
        Polygon::new(self.hermite(i, t))
    }

    /// Entropy integral at an arbitrary time: the stored per-sample value
    /// plus Simpson quadrature over the partial interval.
    pub fn entropy_integral_at(&self, t: f64) -> Result<f64> {
        if self.beta == 0.0 || self.flow == FlowKind::Rescaled {
            return Ok(0.0);
        }
        let i = self.bracket(t)?;
        let s0 = &self.samples[i];
        if t == s0.t {
            return Ok(s0.entropy_integral);
        }
        let g0 = entropy_integrand(s0.t, &s0.velocity, self.beta);
        let gm = {
            let mid = 0.5 * (s0.t + t);
            let y = self.hermite(i, mid);
            entropy_integrand(mid, &velocity_slice(&y, self.beta), self.beta)
        };
        let g1 = {
            let y = if t == self.samples[i + 1].t {
                self.samples[i + 1].polygon.vertices().to_vec()
            } else {
                self.hermite(i, t)
            };
            entropy_integrand(t, &velocity_slice(&y, self.beta), self.beta)
        };
        Ok(s0.entropy_integral + (t - s0.t) / 6.0 * (g0 + 4.0 * gm + g1))
    }
}

/// (beta/2) t^(2/beta+1) |M_X X|^2.
fn entropy_integrand(t: f64, velocity: &[Complex64], beta: f64) -> f64 {
    0.5 * beta * t.powf(2.0 / beta + 1.0) * norm_sq(velocity)
}

fn make_sample(t: f64, y: &[Complex64], v: &[Complex64], entropy_integral: f64, beta: f64) -> Sample {
    let polygon = Polygon::new(y.to_vec()).expect("state dimension is fixed");
    let energy = polygon.energy(beta + 2.0);
    let min_sin_sq = polygon.min_sin_sq_angle();
    let center_of_mass = polygon.center_of_mass();
    Sample { t, polygon, velocity: v.to_vec(), entropy_integral, energy, min_sin_sq, center_of_mass }
}

fn mean(y: &[Complex64]) -> Complex64 {
    y.iter().sum::<Complex64>() / y.len() as f64
}

fn subtract_mean(y: &mut [Complex64]) -> bool {
    let q = mean(y);
    for v in y.iter_mut() {
        *v -= q;
    }
    true
}

/// Decide whether a rescaled run starts on the mean-zero subspace.
fn should_pin_center(y: &[Complex64]) -> bool {
    let q = mean(y);
    let size = y.iter().map(|v| (v - q).norm()).fold(0.0, f64::max);
    q.norm() <= PIN_CENTER_REL_TOL * size.max(f64::MIN_POSITIVE)
}

#[allow(clippy::too_many_arguments)]
fn run_flow(
    p0: &Polygon,
    beta: f64,
    flow: FlowKind,
    t0: f64,
    t_end: f64,
    entropy_start: f64,
    cfg: &IntegratorConfig,
    pin_center: bool,
) -> Result<Trajectory> {
    let n = p0.n();
    let (l, lambda_1) = regular_constants(n);
    let l_pow_beta = l.powf(beta);
    let rhs = move |_t: f64, y: &[Complex64]| match flow {
        FlowKind::Plain => velocity_slice(y, beta),
        FlowKind::Rescaled => rescaled_velocity_slice(y, beta, l_pow_beta, lambda_1),
    };

    let y0: Vec<Complex64> = p0.vertices().to_vec();
    let f0 = rhs(t0, &y0);
    let track_entropy = flow == FlowKind::Plain && beta > 0.0;

    let mut samples = vec![make_sample(t0, &y0, &f0, entropy_start, beta)];
    let mut entropy_acc = entropy_start;

    let stats = integrator::integrate(
        &rhs,
        t0,
        y0,
        t_end,
        cfg,
        |y: &mut Vec<Complex64>| if pin_center { subtract_mean(y) } else { false },
        |step| {
            if track_entropy {
                let g0 = entropy_integrand(step.t0, step.f0, beta);
                let g1 = entropy_integrand(step.t1, step.f1, beta);
                let gm = {
                    // Hermite midpoint of the step, fresh velocity there.
                    let h = step.t1 - step.t0;
                    let ym: Vec<Complex64> = (0..n)
                        .map(|j| {
                            0.5 * (step.y0[j] + step.y1[j]) + 0.125 * h * (step.f0[j] - step.f1[j])
                        })
                        .collect();
                    let tm = 0.5 * (step.t0 + step.t1);
                    entropy_integrand(tm, &velocity_slice(&ym, beta), beta)
                };
                entropy_acc += (step.t1 - step.t0) / 6.0 * (g0 + 4.0 * gm + g1);
            }
            samples.push(make_sample(step.t1, step.y1, step.f1, entropy_acc, beta));
        },
    )?;

    Ok(Trajectory {
        beta,
        flow,
        config: *cfg,
        samples,
        steps_accepted: stats.accepted,
        steps_rejected: stats.rejected,
        pin_center,
    })
}

/// Integrate the polygon flow from t = 0 to `t_end` (t_end > 0, beta >= 0).
pub fn evolve(p0: &Polygon, beta: f64, t_end: f64, cfg: &IntegratorConfig) -> Result<Trajectory> {
    if !(beta >= 0.0) {
        return Err(Error::invalid(format!("beta must be >= 0, got {beta}")));
    }
    if !(t_end > 0.0) {
        return Err(Error::invalid(format!("t_end must be positive, got {t_end}")));
    }
    run_flow(p0, beta, FlowKind::Plain, 0.0, t_end, 0.0, cfg, false)
}

/// Integrate the rescaled system from tau = 0 to `tau_end` (beta > 0).
///
/// When the initial center of mass is zero (within [`PIN_CENTER_REL_TOL`]
/// relative to the polygon size), the state is re-centered after every
/// accepted step: the mean-zero subspace is invariant for the exact system,
/// while the translation mode grows like e^(-lambda_1 tau) and would
/// otherwise amplify rounding noise into the shape. Initial data with a
/// genuinely nonzero center is integrated verbatim.
pub fn evolve_rescaled(y0: &Polygon, beta: f64, tau_end: f64, cfg: &IntegratorConfig) -> Result<Trajectory> {
    if !(beta > 0.0) {
        return Err(Error::BetaZero);
    }
    if !(tau_end > 0.0) {
        return Err(Error::invalid(format!("tau_end must be positive, got {tau_end}")));
    }
    let pin = should_pin_center(y0.vertices());
    run_flow(y0, beta, FlowKind::Rescaled, 0.0, tau_end, 0.0, cfg, pin)
}

/// Continue a trajectory in place until it covers `t_target`.
pub fn extend(traj: &mut Trajectory, t_target: f64, cfg: &IntegratorConfig) -> Result<()> {
    if t_target <= traj.t_end() {
        return Ok(());
    }
    let last = traj.last().clone();
    let tail = run_flow(
        &last.polygon,
        traj.beta,
        traj.flow,
        last.t,
        t_target,
        last.entropy_integral,
        cfg,
        traj.pin_center,
    )?;
    traj.samples.extend(tail.samples.into_iter().skip(1));
    traj.steps_accepted += tail.steps_accepted;
    traj.steps_rejected += tail.steps_rejected;
    Ok(())
}

/// Dilation schedule: strictly increasing c_k and the evaluation time tau.
#[derive(Clone, Debug)]
pub struct RescalingSchedule {
    c_values: Vec<f64>,
    tau: f64,
}

impl RescalingSchedule {
    pub fn new(c_values: Vec<f64>, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::invalid("rescaling tau must be positive"));
        }
        if c_values.is_empty() {
            return Err(Error::invalid("rescaling schedule needs at least one c_k"));
        }
        if !(c_values[0] > 0.0) || c_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("c_values must be positive and strictly increasing"));
        }
        Ok(RescalingSchedule { c_values, tau })
    }

    /// Powers of ten: c_k = 10^k for k = 0..count.
    pub fn powers_of_ten(count: usize, tau: f64) -> Result<Self> {
        RescalingSchedule::new((0..count).map(|k| 10f64.powi(k as i32)).collect(), tau)
    }

    pub fn c_values(&self) -> &[f64] {
        &self.c_values
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Dilation sequence Y^k(tau) = c_k (X(c_k^beta tau) - x0), extending the
/// run on demand; fails with [`Error::RangeExceeded`] if the extension runs
/// out of steps.
pub fn dilation_sequence(
    traj: &mut Trajectory,
    x0: Complex64,
    sched: &RescalingSchedule,
    cfg: &IntegratorConfig,
) -> Result<Vec<Polygon>> {
    if traj.flow != FlowKind::Plain {
        return Err(Error::invalid("dilation sequence is defined for the plain flow"));
    }
    let beta = traj.beta;
    let mut out = Vec::with_capacity(sched.c_values.len());
    for &c in &sched.c_values {
        let t_needed = c.powf(beta) * sched.tau;
        match extend(traj, t_needed, cfg) {
            Ok(()) => {}
            Err(Error::StepLimitExceeded { t, .. }) => {
                return Err(Error::RangeExceeded { t_needed, t_reached: t });
            }
            Err(e) => return Err(e),
        }
        let x = traj.polygon_at(t_needed)?;
        out.push(x.map(|z| c * (z - x0)));
    }
    Ok(out)
}

/// Least-squares fit of M_P P = sigma (P - center): `residual` is the
/// relative misfit, zero exactly for self-similar polygons.
#[derive(Clone, Copy, Debug)]
pub struct SelfSimilarFit {
    pub residual: f64,
    pub sigma: f64,
}

/// Projection residual min over real sigma of |M_P P - sigma (P - Pbar)| / |M_P P|.
pub fn self_similar_residual(p: &Polygon, beta: f64) -> Result<SelfSimilarFit> {
    let v = velocity(p, beta);
    let v_norm_sq = norm_sq(&v);
    if v_norm_sq == 0.0 {
        return Err(Error::ZeroVelocity);
    }
    let com = p.center_of_mass();
    let z: Vec<Complex64> = p.vertices().iter().map(|x| x - com).collect();
    let zz = norm_sq(&z);
    let vz: f64 = v.iter().zip(&z).map(|(a, b)| (a * b.conj()).re).sum();
    let sigma = vz / zz;
    let resid_sq: f64 = v
        .iter()
        .zip(&z)
        .map(|(a, b)| (a - sigma * b).norm_sqr())
        .sum();
    Ok(SelfSimilarFit { residual: (resid_sq / v_norm_sq).sqrt(), sigma })
}

fn edge_vectors(p: &Polygon) -> Vec<Complex64> {
    let n = p.n();
    (0..n).map(|j| p.vertices()[(j + 1) % n] - p.vertices()[j]).collect()
}

fn check_edges(p: &Polygon, lengths: &[f64], indices: &[usize]) -> Result<()> {
    let tol = crate::polygon::COINCIDENCE_REL_TOL * p.diameter();
    for &j in indices {
        if lengths[j] <= tol {
            return Err(Error::DegenerateVertex { index: j });
        }
    }
    Ok(())
}

/// Analytic dl_j/dt:
/// -2 l_j^(beta+1) - l_{j+1}^(beta+1) cos theta_{j+1} - l_{j-1}^(beta+1) cos theta_j.
pub fn edge_length_rhs(p: &Polygon, beta: f64, j: usize) -> Result<f64> {
    let n = p.n();
    assert!(j < n, "edge index out of range");
    let e = edge_vectors(p);
    let l: Vec<f64> = e.iter().map(|v| v.norm()).collect();
    let (jm, jp) = ((j + n - 1) % n, (j + 1) % n);
    check_edges(p, &l, &[jm, j, jp])?;
    // cos theta_j via the adjacent edge vectors at vertex j.
    let cos_at = |k: usize| {
        let km = (k + n - 1) % n;
        let forward = e[k];
        let backward = -e[km];
        (forward.re * backward.re + forward.im * backward.im) / (l[k] * l[km])
    };
    Ok(-2.0 * l[j].powf(beta + 1.0)
        - l[jp].powf(beta + 1.0) * cos_at(jp)
        - l[jm].powf(beta + 1.0) * cos_at(j))
}

/// Analytic d theta_j/dt:
/// (1/(l_j l_{j-1})) [ (l_{j-1}^(beta+2) + l_j^(beta+2)) sin theta_j
///   - l_{j+1}^(beta+1) l_{j-1} sin theta_{j+1} - l_{j-2}^(beta+1) l_j sin theta_{j-1} ].
pub fn angle_rhs(p: &Polygon, beta: f64, j: usize) -> Result<f64> {
    let n = p.n();
    assert!(j < n, "vertex index out of range");
    let e = edge_vectors(p);
    let l: Vec<f64> = e.iter().map(|v| v.norm()).collect();
    let (jm, jm2, jp) = ((j + n - 1) % n, (j + n - 2) % n, (j + 1) % n);
    check_edges(p, &l, &[jm2, jm, j, jp])?;
    let sin_at = |k: usize| {
        let km = (k + n - 1) % n;
        let forward = e[k];
        let backward = -e[km];
        (forward.re * backward.im - forward.im * backward.re) / (l[k] * l[km])
    };
    let sin_j = sin_at(j);
    if sin_j.abs() < COLLINEAR_SIN_TOL {
        return Err(Error::CollinearVertex { index: j, sin_theta: sin_j });
    }
    Ok(((l[jm].powf(beta + 2.0) + l[j].powf(beta + 2.0)) * sin_j
        - l[jp].powf(beta + 1.0) * l[jm] * sin_at(jp)
        - l[jm2].powf(beta + 1.0) * l[j] * sin_at(jm))
        / (l[j] * l[jm]))
}

/// Result of checking the angle lower bound min sin^2 theta >= delta.
#[derive(Clone, Copy, Debug)]
pub struct AngleBoundReport {
    pub holds: bool,
    /// Time of the first sample violating the bound, if any.
    pub first_violation: Option<f64>,
    /// Smallest sin^2 theta seen over the run (NaN if angles ever degenerate).
    pub min_sin_sq: f64,
}

/// Checks min over samples and vertices of sin^2 theta_i >= delta,
/// delta in (0, 1]. Samples with undefined angles count as violations.
pub fn angle_bound_check(traj: &Trajectory, delta: f64) -> Result<AngleBoundReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("delta must be in (0, 1], got {delta}")));
    }
    let mut min_seen = f64::INFINITY;
    let mut first_violation = None;
    for s in traj.samples() {
        match s.min_sin_sq {
            Some(v) => {
                min_seen = min_seen.min(v);
                if v < delta && first_violation.is_none() {
                    first_violation = Some(s.t);
                }
            }
            None => {
                min_seen = f64::NAN;
                if first_violation.is_none() {
                    first_violation = Some(s.t);
                }
            }
        }
    }
    Ok(AngleBoundReport { holds: first_violation.is_none(), first_violation, min_sin_sq: min_seen })
}

/// Least-squares slope of ln F_alpha against ln t over the last decade of
/// the run (t >= t_end / 10); the self-similar decay rate is -(beta+2)/beta,
/// approached as beta l^beta |lambda| t grows.
pub fn energy_decay_exponent(traj: &Trajectory) -> Option<f64> {
    let cutoff = traj.t_end() / 10.0;
    let pts: Vec<(f64, f64)> = traj
        .samples()
        .iter()
        .filter(|s| s.t >= cutoff)
        .filter(|s| s.t > 0.0 && s.energy > 0.0)
        .map(|s| (s.t.ln(), s.energy.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Seed for the fixed probe points Q of the alpha-norm monotonicity check.
const ALPHA_NORM_PROBE_SEED: u64 = 2024;

/// Monotone-quantity audit of a trajectory at sample resolution.
///
/// Checks that apply only to the plain flow (energy, the alpha-norm bound,
/// the entropy functional) are `None` on rescaled trajectories. Each
/// comparison allows slack of 50 * rel_tol * (1 + |value|) for integrator
/// noise.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MonotoneChecks {
    pub center_of_mass_drift: f64,
    pub center_of_mass_pass: bool,
    pub energy_nonincreasing: Option<bool>,
    pub alpha_norm_nonincreasing: Option<bool>,
    pub rho_nonincreasing: Option<bool>,
    pub entropy_integral_nondecreasing: bool,
}

impl MonotoneChecks {
    /// Evaluates the audit; `x0` overrides the entropy base point, which
    /// defaults to the initial center of mass.
    pub fn evaluate(traj: &Trajectory, x0: Option<Complex64>) -> MonotoneChecks {
        let rel_tol = traj.config.rel_tol;
        let slack = |v: f64| 50.0 * rel_tol * (1.0 + v.abs());
        let nonincreasing = |vals: &[f64]| vals.windows(2).all(|w| w[1] <= w[0] + slack(w[0]));

        let com0 = traj.first().center_of_mass;
        let scale = traj.first().polygon.p_norm(2.0).expect("p=2 is valid");
        let drift = traj
            .samples()
            .iter()
            .map(|s| (s.center_of_mass - com0).norm())
            .fold(0.0, f64::max)
            / scale.max(f64::MIN_POSITIVE);
        let com_pass = drift <= 10.0 * rel_tol;

        let plain = traj.flow == FlowKind::Plain;
        let energies: Vec<f64> = traj.samples().iter().map(|s| s.energy).collect();
        let energy_nonincreasing = plain.then(|| nonincreasing(&energies));

        let alpha_norm_nonincreasing = plain.then(|| {
            let alpha = traj.beta + 2.0;
            let mut rng = Lcg64::new(ALPHA_NORM_PROBE_SEED);
            let size = traj.first().polygon.diameter().max(1e-3);
            (0..10).all(|_| {
                let q = com0 + Complex64::new(rng.symmetric(), rng.symmetric()) * (2.0 * size);
                let norms: Vec<f64> = traj
                    .samples()
                    .iter()
                    .map(|s| p_norm_slice(&s.polygon.vertices().iter().map(|z| z - q).collect::<Vec<_>>(), alpha))
                    .collect();
                nonincreasing(&norms)
            })
        });

        let rho_nonincreasing = (plain && traj.beta > 0.0).then(|| {
            let base = x0.unwrap_or(com0);
            let rhos: Vec<f64> = traj
                .samples()
                .iter()
                .map(|s| entropy::rho_of_sample(s, base, traj.beta))
                .collect();
            nonincreasing(&rhos)
        });

        let entropy_integral_nondecreasing = traj
            .samples()
            .windows(2)
            .all(|w| w[1].entropy_integral >= w[0].entropy_integral);

        MonotoneChecks {
            center_of_mass_drift: drift,
            center_of_mass_pass: com_pass,
            energy_nonincreasing,
            alpha_norm_nonincreasing,
            rho_nonincreasing,
            entropy_integral_nondecreasing,
        }
    }

    /// True when every applicable check passed.
    pub fn all_pass(&self) -> bool {
        self.center_of_mass_pass
            && self.energy_nonincreasing.unwrap_or(true)
            && self.alpha_norm_nonincreasing.unwrap_or(true)
            && self.rho_nonincreasing.unwrap_or(true)
            && self.entropy_integral_nondecreasing
    }
}
