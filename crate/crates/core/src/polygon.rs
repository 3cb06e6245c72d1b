//! Planar polygons with complex-number vertex semantics.
//!
//! A polygon is an ordered N-tuple of points in the plane, indexed cyclically
//! modulo N. Vertices are stored as `Complex64`, so similarity transforms are
//! complex multiplications. A polygon whose vertices all coincide is a valid
//! "point" state (the fixed points of the flow) but has no defined angles.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative tolerance below which consecutive vertices count as coincident:
/// distance < `COINCIDENCE_REL_TOL` * diameter.
pub const COINCIDENCE_REL_TOL: f64 = 1e-12;

/// Ordered N-tuple of planar points, N >= 3, cyclic indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Complex64>,
}

impl Polygon {
    /// Builds a polygon from complex vertices; rejects N < 3.
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        Ok(Polygon { vertices })
    }

    /// Builds a polygon from (x, y) pairs.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        Polygon::new(points.iter().map(|&(x, y)| Complex64::new(x, y)).collect())
    }

    /// Regular (possibly star) polygon P_k: vertex j at angle 2*pi*j*k/N on
    /// the unit circle. `k = 0` gives the point polygon at (1, 0).
    pub fn regular(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        if k >= n {
            return Err(Error::invalid(format!("winding k = {k} must lie in [0, {}]", n - 1)));
        }
        let vertices = (0..n)
            .map(|j| {
                let angle = TAU * ((j * k) % n) as f64 / n as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        Ok(Polygon { vertices })
    }

    /// Point polygon: all N vertices at `at`.
    pub fn point(n: usize, at: Complex64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        Ok(Polygon { vertices: vec![at; n] })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    /// Vertex with cyclic index (any integer, reduced modulo N).
    pub fn vertex(&self, j: isize) -> Complex64 {
        let n = self.vertices.len() as isize;
        self.vertices[j.rem_euclid(n) as usize]
    }

    /// Edge lengths l_j = |X_{j+1} - X_j|; zero lengths are allowed.
    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|j| (self.vertices[(j + 1) % n] - self.vertices[j]).norm())
            .collect()
    }

    /// Largest pairwise vertex distance (0 for point polygons).
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                d = d.max((self.vertices[i] - self.vertices[j]).norm());
            }
        }
        d
    }

    /// Interior angles theta_j: the counterclockwise rotation carrying the
    /// unit forward edge direction at X_j onto the unit backward direction,
    /// normalized to [0, 2*pi). Convex counterclockwise polygons get values
    /// in (0, pi); reflex vertices of nonconvex polygons land in (pi, 2*pi).
    /// For clockwise polygons this is the raw rotation angle, not a guessed
    /// "interior" convention.
    ///
    /// Errors with [`Error::DegenerateVertex`] when consecutive vertices
    /// coincide within `COINCIDENCE_REL_TOL` times the diameter.
    pub fn interior_angles(&self) -> Result<Vec<f64>> {
        let n = self.n();
        let tol = COINCIDENCE_REL_TOL * self.diameter();
        let mut angles = Vec::with_capacity(n);
        for j in 0..n {
            let forward = self.vertices[(j + 1) % n] - self.vertices[j];
            let backward = self.vertices[(j + n - 1) % n] - self.vertices[j];
            if forward.norm() <= tol {
                return Err(Error::DegenerateVertex { index: j });
            }
            if backward.norm() <= tol {
                return Err(Error::DegenerateVertex { index: (j + n - 1) % n });
            }
            let cross = forward.re * backward.im - forward.im * backward.re;
            let dot = forward.re * backward.re + forward.im * backward.im;
            let mut theta = cross.atan2(dot);
            if theta < 0.0 {
                theta += TAU;
            }
            angles.push(theta);
        }
        Ok(angles)
    }

    /// Energy F_alpha = (1/alpha) * sum_j l_j^alpha, alpha > 0.
    pub fn energy(&self, alpha: f64) -> f64 {
        assert!(alpha > 0.0, "energy exponent must be positive");
        self.edge_lengths().iter().map(|l| l.powf(alpha)).sum::<f64>() / alpha
    }

    /// p-norm over vertices: (sum_k |X_k|^p)^(1/p), p >= 1.
    pub fn p_norm(&self, p: f64) -> Result<f64> {
        if p < 1.0 {
            return Err(Error::invalid(format!("p-norm requires p >= 1, got {p}")));
        }
        Ok(p_norm_slice(&self.vertices, p))
    }

    /// Center of mass (1/N) * sum_j X_j.
    pub fn center_of_mass(&self) -> Complex64 {
        let sum: Complex64 = self.vertices.iter().sum();
        sum / self.n() as f64
    }

    /// z -> scale * e^{i rotation} * z + translation on every vertex; scale > 0.
    pub fn apply_similarity(
        &self,
        scale: f64,
        rotation: f64,
        translation: Complex64,
    ) -> Result<Polygon> {
        if scale <= 0.0 {
            return Err(Error::invalid(format!("similarity scale must be > 0, got {scale}")));
        }
        let factor = Complex64::from_polar(scale, rotation);
        Ok(self.map(|z| factor * z + translation))
    }

    /// New polygon with `f` applied to every vertex.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Polygon {
        Polygon { vertices: self.vertices.iter().copied().map(f).collect() }
    }

    /// Translation by -center_of_mass.
    pub fn centered(&self) -> Polygon {
        let c = self.center_of_mass();
        self.map(|z| z - c)
    }

    /// min_j sin^2(theta_j), or `None` when some angle is undefined.
    pub fn min_sin_sq_angle(&self) -> Option<f64> {
        self.interior_angles()
            .ok()
            .map(|th| th.iter().map(|t| t.sin().powi(2)).fold(f64::INFINITY, f64::min))
    }

    /// JSON form: array of [x, y] pairs.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("polygon serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Polygon> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// CSV form with header `j,x,y`, one row per vertex, 17 significant
    /// digits so the round trip is exact.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("j,x,y\n");
        for (j, z) in self.vertices.iter().enumerate() {
            out.push_str(&format!("{j},{},{}\n", fmt_f64(z.re), fmt_f64(z.im)));
        }
        out
    }

    pub fn from_csv_str(s: &str) -> Result<Polygon> {
        let mut vertices = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line == "j,x,y") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected j,x,y", lineno + 1)));
            }
            let x: f64 = fields[1]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad x {:?}", lineno + 1, fields[1])))?;
            let y: f64 = fields[2]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad y {:?}", lineno + 1, fields[2])))?;
            vertices.push(Complex64::new(x, y));
        }
        Polygon::new(vertices)
    }
}

/// 17 significant digits: enough to reproduce any f64 exactly.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// p-norm of a complex vector, (sum |z_k|^p)^(1/p).
pub fn p_norm_slice(z: &[Complex64], p: f64) -> f64 {
    z.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Squared 2-norm of a complex vector.
pub fn norm_sq(z: &[Complex64]) -> f64 {
    z.iter().map(|v| v.norm_sqr()).sum()
}

impl Serialize for Polygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.vertices.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        if pairs.len() < 3 {
            return Err(D::Error::custom(format!(
                "polygon must have at least 3 vertices, got {}",
                pairs.len()
            )));
        }
        Ok(Polygon {
            vertices: pairs.iter().map(|&[x, y]| Complex64::new(x, y)).collect(),
        })
    }
}

/// Flow parameters: exponent beta >= 0 and the derived energy exponent
/// alpha = beta + 2. Entropy and rescaled-flow features need beta > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    beta: f64,
    /// Optional delta of the angle lower bound, in (0, 1].
    angle_floor_delta: Option<f64>,
}

impl FlowParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta >= 0.0) {
            return Err(Error::invalid(format!("beta must be >= 0, got {beta}")));
        }
        Ok(FlowParams { beta, angle_floor_delta: None })
    }

    pub fn with_angle_floor(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::invalid(format!("angle floor delta must be in (0, 1], got {delta}")));
        }
        self.angle_floor_delta = Some(delta);
        Ok(self)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// alpha = beta + 2, always.
    pub fn alpha(&self) -> f64 {
        self.beta + 2.0
    }

    pub fn angle_floor_delta(&self) -> Option<f64> {
        self.angle_floor_delta
    }
}
