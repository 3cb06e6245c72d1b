//! File formats: trajectory CSV, summary JSON, triangle-run CSV.
//!
//! All numeric columns print with 17 significant digits so identical runs
//! produce byte-identical files and values round-trip exactly.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::flow::{FlowKind, MonotoneChecks, Trajectory};
use crate::polygon::fmt_f64;
use crate::triangle::{lyapunov_v, lyapunov_v_dot, TriangleAngles};

/// Trajectory CSV, one row per (sample, vertex):
/// `t,j,x,y,l_j,theta_j,F_alpha,rho`. Angles of degenerate samples and the
/// rho column of beta = 0 or rescaled runs print as NaN.
pub fn trajectory_csv(traj: &Trajectory, x0: Option<Complex64>) -> String {
    let base = x0.unwrap_or(traj.first().center_of_mass);
    let has_rho = traj.beta > 0.0 && traj.flow == FlowKind::Plain;
    let mut out = String::from("t,j,x,y,l_j,theta_j,F_alpha,rho\n");
    for s in traj.samples() {
        let lengths = s.polygon.edge_lengths();
        let angles = s.polygon.interior_angles().ok();
        let rho = if has_rho {
            let dist_sq: f64 = s.polygon.vertices().iter().map(|z| (z - base).norm_sqr()).sum();
            (-s.t.powf(2.0 / traj.beta) * dist_sq - s.entropy_integral).exp()
        } else {
            f64::NAN
        };
        for (j, z) in s.polygon.vertices().iter().enumerate() {
            let theta = angles.as_ref().map_or(f64::NAN, |a| a[j]);
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_f64(s.t),
                j,
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(lengths[j]),
                fmt_f64(theta),
                fmt_f64(s.energy),
                fmt_f64(rho),
            ));
        }
    }
    out
}

/// Run summary serialized as JSON.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub beta: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub t_end: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub final_center_of_mass: [f64; 2],
    pub monotone_checks: MonotoneChecks,
}

impl RunSummary {
    pub fn of(traj: &Trajectory) -> RunSummary {
        let com = traj.last().center_of_mass;
        RunSummary {
            beta: traj.beta,
            n: traj.n(),
            t_end: traj.t_end(),
            steps_accepted: traj.steps_accepted,
            steps_rejected: traj.steps_rejected,
            final_center_of_mass: [com.re, com.im],
            monotone_checks: MonotoneChecks::evaluate(traj, None),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialization cannot fail")
    }
}

/// Triangle-run CSV: `t,theta0,theta1,theta2,V,Vdot`, one row per sample.
pub fn triangle_run_csv(traj: &Trajectory) -> Result<String> {
    let mut out = String::from("t,theta0,theta1,theta2,V,Vdot\n");
    for s in traj.samples() {
        let angles = TriangleAngles::of_polygon(&s.polygon)?;
        let [t0, t1, t2] = angles.theta();
        let v = lyapunov_v(&angles);
        let v_dot = lyapunov_v_dot(&s.polygon, traj.beta)?;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(s.t),
            fmt_f64(t0),
            fmt_f64(t1),
            fmt_f64(t2),
            fmt_f64(v),
            fmt_f64(v_dot),
        ));
    }
    Ok(out)
}
