//! Reproducible experiment procedures: the heptagon rescaling iteration,
//! quadrilateral limit shapes, and batches of triangle convergence runs.
//!
//! Everything here is deterministic given its seed; the generator is the
//! documented 64-bit LCG, so other implementations can reproduce inputs
//! bit for bit.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{
    evolve, evolve_rescaled, self_similar_residual, IntegratorConfig, Trajectory,
};
use crate::polygon::Polygon;
use crate::rng::Lcg64;
use crate::triangle::{lyapunov_v, lyapunov_v_dot, TriangleAngles};

/// Sum of squared angle deviations from the regular value (N-2) pi / N.
pub fn angle_error(p: &Polygon) -> Result<f64> {
    let regular = (p.n() as f64 - 2.0) * PI / p.n() as f64;
    Ok(p.interior_angles()?.iter().map(|t| (t - regular).powi(2)).sum())
}

/// Sum of squared deviations of consecutive edge ratios from 1.
pub fn edge_ratio_error(p: &Polygon) -> f64 {
    let l = p.edge_lengths();
    let n = l.len();
    (0..n).map(|j| (l[j] / l[(j + 1) % n] - 1.0).powi(2)).sum()
}

/// Sum of squared angle deviations from a right angle.
pub fn right_angle_error(p: &Polygon) -> Result<f64> {
    Ok(p.interior_angles()?.iter().map(|t| (t - PI / 2.0).powi(2)).sum())
}

/// Regular N-gon with seeded radial/tangential vertex offsets:
/// vertex j sits at radius 1 + amplitude * u_j and angle
/// 2 pi j / N + amplitude * v_j, with u_j, v_j uniform on [-1, 1).
///
/// Draw order from the LCG stream: the N radial offsets u_0..u_{N-1} first,
/// then the N tangential offsets v_0..v_{N-1}. Each uniform draw consumes
/// one generator step (top 53 bits scaled, then mapped to [-1, 1)).
pub fn perturbed_regular(n: usize, seed: u64, amplitude: f64) -> Result<Polygon> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let mut rng = Lcg64::new(seed);
    let radial: Vec<f64> = (0..n).map(|_| rng.symmetric()).collect();
    let tangential: Vec<f64> = (0..n).map(|_| rng.symmetric()).collect();
    let vertices = (0..n)
        .map(|j| {
            let r = 1.0 + amplitude * radial[j];
            let phi = 2.0 * PI * j as f64 / n as f64 + amplitude * tangential[j];
            Complex64::from_polar(r, phi)
        })
        .collect();
    Polygon::new(vertices)
}

/// Parameters of the iterate-and-rescale heptagon run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HeptagonParams {
    pub seed: u64,
    pub perturb: f64,
    pub iterations: usize,
    pub tau: f64,
    pub beta: f64,
}

impl Default for HeptagonParams {
    fn default() -> Self {
        HeptagonParams { seed: 7, perturb: 0.2, iterations: 6, tau: 1.0, beta: 1.0 }
    }
}

/// One row of an experiment: iteration index, cumulative dilation, and the
/// two shape-error metrics plus the self-similar misfit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    pub c_k: f64,
    pub angle_error: f64,
    pub edge_ratio_error: f64,
    pub self_similar_residual: f64,
}

/// Output of an iterated experiment: per-iteration metrics, the evolved
/// polygon snapshots (before each rescaling), and the trajectories.
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub params: HeptagonParams,
    pub records: Vec<IterationRecord>,
    pub initial: Polygon,
    /// Evolved polygon at the end of iteration k, before multiplying by 10.
    pub snapshots: Vec<Polygon>,
    pub trajectories: Vec<Trajectory>,
}

/// The heptagon experiment: evolve to time tau, record the shape errors of
/// the evolved polygon, multiply by 10, repeat. Record k carries
/// c_k = 10^k, the dilation accumulated before iteration k.
///
/// The initial heptagon is [`perturbed_regular`] (N = 7) recentered to the
/// origin, so the rescalings do not push the polygon away from 0.
pub fn heptagon_experiment(params: &HeptagonParams, cfg: &IntegratorConfig) -> Result<ExperimentResult> {
    if params.iterations == 0 {
        return Err(Error::invalid("heptagon experiment needs at least one iteration"));
    }
    let initial = perturbed_regular(7, params.seed, params.perturb)?.centered();
    let mut current = initial.clone();
    let mut records = Vec::with_capacity(params.iterations);
    let mut snapshots = Vec::with_capacity(params.iterations);
    let mut trajectories = Vec::with_capacity(params.iterations);

    for k in 0..params.iterations {
        let traj = evolve(&current, params.beta, params.tau, cfg)?;
        let evolved = traj.last().polygon.clone();
        let fit = self_similar_residual(&evolved, params.beta)?;
        records.push(IterationRecord {
            k,
            c_k: 10f64.powi(k as i32),
            angle_error: angle_error(&evolved)?,
            edge_ratio_error: edge_ratio_error(&evolved),
            self_similar_residual: fit.residual,
        });
        snapshots.push(evolved.clone());
        trajectories.push(traj);
        current = evolved.map(|z| 10.0 * z);
    }

    Ok(ExperimentResult { params: *params, records, initial, snapshots, trajectories })
}

/// Starting shape for the quadrilateral experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadShape {
    /// Axis-aligned rectangle with width/height = aspect, centered.
    Rectangle { aspect: f64 },
    /// Unit-edge rhombus with the given vertex angle, centered.
    Rhombus { angle: f64 },
    /// Seeded perturbation of the square.
    Generic { seed: u64, amplitude: f64 },
}

impl QuadShape {
    pub fn build(&self) -> Result<Polygon> {
        match *self {
            QuadShape::Rectangle { aspect } => {
                if !(aspect > 0.0) {
                    return Err(Error::invalid("rectangle aspect must be positive"));
                }
                Polygon::from_points(&[
                    (aspect, 1.0),
                    (-aspect, 1.0),
                    (-aspect, -1.0),
                    (aspect, -1.0),
                ])
            }
            QuadShape::Rhombus { angle } => {
                if !(angle > 0.0 && angle < PI) {
                    return Err(Error::invalid("rhombus angle must be in (0, pi)"));
                }
                let d1 = (angle / 2.0).cos();
                let d2 = (angle / 2.0).sin();
                Polygon::from_points(&[(d1, 0.0), (0.0, d2), (-d1, 0.0), (0.0, -d2)])
            }
            QuadShape::Generic { seed, amplitude } => {
                Ok(perturbed_regular(4, seed, amplitude)?.centered())
            }
        }
    }
}

/// Limit classification of a quadrilateral run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadClass {
    Square,
    Rhombus,
    Other,
}

/// Outcome of a rescaled quadrilateral run.
#[derive(Clone, Debug)]
pub struct QuadResult {
    /// Sum of squared (l_i / l_{i+1} - 1) at the end state.
    pub edge_residual: f64,
    /// Sum of squared (theta_i - pi/2) at the end state.
    pub angle_residual: f64,
    pub class: QuadClass,
    pub limit: Polygon,
    pub trajectory: Trajectory,
}

/// Runs the rescaled flow on a quadrilateral and reports the limit-shape
/// residuals: rectangles approach the square (both residuals to zero) while
/// rhombi keep their angles, a self-similar family of their own.
pub fn quad_experiment(shape: QuadShape, beta: f64, tau_end: f64, cfg: &IntegratorConfig) -> Result<QuadResult> {
    let start = shape.build()?.centered();
    let trajectory = evolve_rescaled(&start, beta, tau_end, cfg)?;
    let limit = trajectory.last().polygon.clone();
    let edge_residual = edge_ratio_error(&limit);
    let angle_residual = right_angle_error(&limit)?;
    let class = if edge_residual < 1e-6 && angle_residual < 1e-6 {
        QuadClass::Square
    } else if edge_residual < 1e-4 {
        QuadClass::Rhombus
    } else {
        QuadClass::Other
    };
    Ok(QuadResult { edge_residual, angle_residual, class, limit, trajectory })
}

/// Distance from `p` to the orbit {e^{i eta} P_1} of the regular N-gon,
/// minimized over the phase eta, plus the minimizing eta.
///
/// |P - e^{i eta} P_1|^2 = |P|^2 + N - 2 Re(e^{-i eta} z) with
/// z = sum_j P_j conj(omega^j), so the minimum is at eta = arg z with
/// squared distance |P|^2 + N - 2 |z|.
pub fn distance_to_regular_orbit(p: &Polygon) -> (f64, f64) {
    let n = p.n();
    let z: Complex64 = p
        .vertices()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
            v * w.conj()
        })
        .sum();
    let norm_sq: f64 = p.vertices().iter().map(|v| v.norm_sqr()).sum();
    let dist_sq = (norm_sq + n as f64 - 2.0 * z.norm()).max(0.0);
    (dist_sq.sqrt(), z.arg())
}

/// Seeded random triangle: vertices uniform in [-1, 1)^2, redrawn until the
/// area is not tiny, relabeled counterclockwise, centered.
pub fn random_triangle(rng: &mut Lcg64) -> Polygon {
    loop {
        let pts: Vec<Complex64> = (0..3)
            .map(|_| Complex64::new(rng.symmetric(), rng.symmetric()))
            .collect();
        let signed = 0.5
            * ((pts[1].re - pts[0].re) * (pts[2].im - pts[0].im)
                - (pts[2].re - pts[0].re) * (pts[1].im - pts[0].im));
        if signed.abs() < 0.05 {
            continue;
        }
        let ordered = if signed > 0.0 { pts } else { vec![pts[0], pts[2], pts[1]] };
        return Polygon::new(ordered).expect("three vertices").centered();
    }
}

/// Seeded random N-gon: regular vertices with radial/tangential noise,
/// centered. Amplitude large enough to be properly irregular while keeping
/// angles defined.
pub fn random_polygon(n: usize, rng: &mut Lcg64, amplitude: f64) -> Result<Polygon> {
    let mut seeded = Lcg64::new(rng.next_u64());
    let vertices = (0..n)
        .map(|j| {
            let r = 1.0 + amplitude * seeded.symmetric();
            let phi = 2.0 * PI * j as f64 / n as f64 + amplitude * seeded.symmetric();
            Complex64::from_polar(r, phi)
        })
        .collect();
    Ok(Polygon::new(vertices)?.centered())
}

/// Result of one rescaled triangle convergence run.
#[derive(Clone, Debug)]
pub struct TriangleRun {
    pub trajectory: Trajectory,
    /// max_j |theta_j - pi/3| at the final state.
    pub final_angle_deviation: f64,
    /// V evaluated at every sample, in time order.
    pub v_values: Vec<f64>,
    /// dV/dt evaluated at every sample.
    pub v_dot_values: Vec<f64>,
}

/// Evolves a triangle under the rescaled flow, extending in chunks until
/// max_j |theta_j - pi/3| < `target` or tau exceeds `tau_cap`.
pub fn triangle_convergence_run(
    triangle: &Polygon,
    beta: f64,
    target: f64,
    tau_cap: f64,
    cfg: &IntegratorConfig,
) -> Result<TriangleRun> {
    assert_eq!(triangle.n(), 3, "triangle run needs N = 3");
    let chunk = 10.0;
    let mut traj = evolve_rescaled(&triangle.centered(), beta, chunk, cfg)?;
    let deviation = |p: &Polygon| -> Result<f64> {
        Ok(TriangleAngles::of_polygon(p)?
            .theta()
            .iter()
            .map(|t| (t - PI / 3.0).abs())
            .fold(0.0, f64::max))
    };
    let mut dev = deviation(&traj.last().polygon)?;
    while dev >= target && traj.t_end() < tau_cap {
        let target_tau = traj.t_end() + chunk;
        crate::flow::extend(&mut traj, target_tau, cfg)?;
        dev = deviation(&traj.last().polygon)?;
    }

    let mut v_values = Vec::with_capacity(traj.samples().len());
    let mut v_dot_values = Vec::with_capacity(traj.samples().len());
    for s in traj.samples() {
        let angles = TriangleAngles::of_polygon(&s.polygon)?;
        v_values.push(lyapunov_v(&angles));
        v_dot_values.push(lyapunov_v_dot(&s.polygon, beta)?);
    }

    Ok(TriangleRun { trajectory: traj, final_angle_deviation: dev, v_values, v_dot_values })
}
