//! Triangle machinery: angle ODEs, area relation, and the Lyapunov function
//! certifying convergence to the equilateral shape.
//!
//! For a counterclockwise triangle with angles (theta_0, theta_1, theta_2)
//! in the simplex theta_0 + theta_1 + theta_2 = pi, the angle derivatives
//! close into three explicit expressions, and
//! V = -(pi - theta_0)(pi - theta_1)(pi - theta_2) decreases strictly away
//! from the equilateral point (pi/3, pi/3, pi/3).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::polygon::Polygon;

/// sin theta below this counts as a degenerate triangle.
pub const DEGENERATE_SIN_TOL: f64 = 1e-12;

/// Tolerance on the angle-sum invariant theta_0 + theta_1 + theta_2 = pi.
pub const ANGLE_SUM_TOL: f64 = 1e-10;

/// Angle triple of a nondegenerate counterclockwise triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleAngles {
    theta: [f64; 3],
}

impl TriangleAngles {
    /// Validates each angle in (0, pi) and the sum pi (to `ANGLE_SUM_TOL`).
    pub fn new(theta: [f64; 3]) -> Result<Self> {
        for t in theta {
            if !(t > 0.0 && t < PI) {
                return Err(Error::invalid(format!("triangle angle {t} outside (0, pi)")));
            }
        }
        let sum: f64 = theta.iter().sum();
        if (sum - PI).abs() > ANGLE_SUM_TOL {
            return Err(Error::invalid(format!("triangle angles sum to {sum}, expected pi")));
        }
        Ok(TriangleAngles { theta })
    }

    /// Angle triple of a counterclockwise triangle polygon.
    pub fn of_polygon(p: &Polygon) -> Result<Self> {
        let g = TriangleGeometry::of_polygon(p)?;
        TriangleAngles::new([
            g.sin[0].atan2(g.cos[0]),
            g.sin[1].atan2(g.cos[1]),
            g.sin[2].atan2(g.cos[2]),
        ])
    }

    pub fn theta(&self) -> [f64; 3] {
        self.theta
    }
}

/// Shared edge/angle data of a counterclockwise triangle.
struct TriangleGeometry {
    l: [f64; 3],
    sin: [f64; 3],
    cos: [f64; 3],
    /// Mean of the three sine-formula areas.
    area: f64,
}

impl TriangleGeometry {
    fn of_polygon(p: &Polygon) -> Result<Self> {
        assert_eq!(p.n(), 3, "triangle operations need N = 3");
        let v = p.vertices();
        let e = [v[1] - v[0], v[2] - v[1], v[0] - v[2]];
        let l = [e[0].norm(), e[1].norm(), e[2].norm()];

        let signed = 0.5
            * ((v[1].re - v[0].re) * (v[2].im - v[0].im)
                - (v[2].re - v[0].re) * (v[1].im - v[0].im));
        let mut sin = [0.0; 3];
        let mut cos = [0.0; 3];
        let mut min_sin = f64::INFINITY;
        for j in 0..3 {
            let jm = (j + 2) % 3;
            let denom = l[j] * l[jm];
            if denom == 0.0 {
                return Err(Error::DegenerateTriangle { min_sin: 0.0 });
            }
            let forward = e[j];
            let backward = -e[jm];
            sin[j] = (forward.re * backward.im - forward.im * backward.re) / denom;
            cos[j] = (forward.re * backward.re + forward.im * backward.im) / denom;
            min_sin = min_sin.min(sin[j].abs());
        }
        if min_sin < DEGENERATE_SIN_TOL {
            return Err(Error::DegenerateTriangle { min_sin });
        }
        if signed < 0.0 {
            return Err(Error::ClockwiseTriangle { signed_area: signed });
        }
        // S three ways: (1/2) l_0 l_2 sin t0 = (1/2) l_0 l_1 sin t1 = (1/2) l_1 l_2 sin t2.
        let s0 = 0.5 * l[0] * l[2] * sin[0];
        let s1 = 0.5 * l[0] * l[1] * sin[1];
        let s2 = 0.5 * l[1] * l[2] * sin[2];
        Ok(TriangleGeometry { l, sin, cos, area: (s0 + s1 + s2) / 3.0 })
    }

}

/// Triangle area as the mean of the three sine-formula evaluations
/// (1/2) l_0 l_2 sin theta_0, (1/2) l_0 l_1 sin theta_1, (1/2) l_1 l_2 sin theta_2,
/// which agree to ~1e-10 relative on nondegenerate input.
pub fn triangle_area(p: &Polygon) -> Result<f64> {
    Ok(TriangleGeometry::of_polygon(p)?.area)
}

/// The three d theta_j/dt closed forms; their sum vanishes (the angle sum
/// is conserved) and all three vanish exactly on equilateral triangles.
pub fn triangle_angle_rhs(p: &Polygon, beta: f64) -> Result<[f64; 3]> {
    let g = TriangleGeometry::of_polygon(p)?;
    let [l0, l1, l2] = g.l;
    let pow = |l: f64| l.powf(beta);
    let t1 = l1 * l1 * g.sin[1] * g.sin[1] * (pow(l2) - pow(l1));
    let t2 = l0 * l0 * g.sin[0] * g.sin[0] * (pow(l0) - pow(l1));
    let t3 = l2 * l2 * g.sin[2] * g.sin[2] * (pow(l0) - pow(l2));
    let half_s_inv = 1.0 / (2.0 * g.area);
    Ok([
        half_s_inv * (t1 + t2),
        half_s_inv * (t3 - t1),
        half_s_inv * (-t2 - t3),
    ])
}

/// Lyapunov function V = -(pi - theta_0)(pi - theta_1)(pi - theta_2):
/// negative on the open simplex, zero on its boundary, minimal exactly at
/// the equilateral point where V = -(2 pi / 3)^3.
pub fn lyapunov_v(angles: &TriangleAngles) -> f64 {
    let [t0, t1, t2] = angles.theta();
    -(PI - t0) * (PI - t1) * (PI - t2)
}

/// Closed-form dV/dt along the flow; nonpositive, and zero only at the
/// equilateral shape.
pub fn lyapunov_v_dot(p: &Polygon, beta: f64) -> Result<f64> {
    let g = TriangleGeometry::of_polygon(p)?;
    let angles = TriangleAngles::of_polygon(p)?;
    let [t0, t1, t2] = angles.theta();
    let [l0, l1, l2] = g.l;
    let pow = |l: f64| l.powf(beta);
    let term1 = l1 * l1 * g.sin[1] * g.sin[1] * (pow(l2) - pow(l1)) * (t0 - t1) * (PI - t2);
    let term2 = l0 * l0 * g.sin[0] * g.sin[0] * (pow(l0) - pow(l1)) * (t0 - t2) * (PI - t1);
    let term3 = l2 * l2 * g.sin[2] * g.sin[2] * (pow(l0) - pow(l2)) * (t1 - t2) * (PI - t0);
    Ok((term1 + term2 + term3) / (2.0 * g.area))
}
