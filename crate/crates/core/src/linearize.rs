//! Linearization of the rescaled flow at the regular polygon and its
//! spectral classification.
//!
//! In flattened real coordinates (x_0^r, ..., x_{N-1}^r, x_0^i, ..., x_{N-1}^i)
//! the Jacobian at the regular N-gon is D + beta E with
//! D = -lambda_1 I + diag(M, M) and E = [[A, C], [C, B]]. M is the circulant
//! second-difference matrix; A, B, C are cycle matrices with weights
//! sin^2((2k+1)theta), cos^2((2k+1)theta), -cos((2k+1)theta) sin((2k+1)theta),
//! theta = pi/N. The positive eigenvalue -lambda_1 has the two translation
//! eigenvectors; the kernel is the rotation generator iP_1 (plus the
//! orientation-reversed polygon for N = 4); all other eigenvalues are
//! negative.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{regular_constants, rescaled_velocity};
use crate::jacobi::symmetric_eigs;
use crate::mat::{vec_dot, vec_norm, Mat};
use crate::polygon::Polygon;

/// Step used for the finite-difference Jacobian check inside
/// [`classify_spectrum`].
pub const FD_JACOBIAN_STEP: f64 = 1e-6;

/// Weighted cycle matrix: off-diagonal (k, k+1) = a_k, diagonal
/// -(a_{k-1} + a_k), cyclic. Negative semidefinite when all a_k >= 0.
pub fn cycle_matrix(a: &[f64]) -> Mat {
    let n = a.len();
    assert!(n >= 3, "cycle matrix needs at least 3 entries");
    let mut m = Mat::zeros(n, n);
    for k in 0..n {
        let next = (k + 1) % n;
        let prev = (k + n - 1) % n;
        m[(k, next)] += a[k];
        m[(k, prev)] += a[prev];
        m[(k, k)] = -(a[prev] + a[k]);
    }
    m
}

/// x A_a y^T evaluated through the difference form
/// -sum_k a_k (x_{k+1} - x_k)(y_{k+1} - y_k); agrees with the dense product
/// against [`cycle_matrix`].
pub fn quadratic_form_cycle(a: &[f64], x: &[f64], y: &[f64]) -> f64 {
    let n = a.len();
    assert!(x.len() == n && y.len() == n, "cycle form needs equal lengths");
    -(0..n)
        .map(|k| {
            let next = (k + 1) % n;
            a[k] * (x[next] - x[k]) * (y[next] - y[k])
        })
        .sum::<f64>()
}

/// The matrices of the linearization at P_1 for a given N and beta.
#[derive(Clone, Debug)]
pub struct BlockMatrices {
    pub n: usize,
    pub beta: f64,
    /// theta = pi / N.
    pub theta_param: f64,
    /// lambda_1 = -4 sin^2(pi / N).
    pub lambda_1: f64,
    /// Circulant second-difference matrix (all weights 1).
    pub m: Mat,
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    /// D = -lambda_1 I + diag(M, M), 2N x 2N.
    pub d: Mat,
    /// E = [[A, C], [C, B]], 2N x 2N.
    pub e: Mat,
}

impl BlockMatrices {
    /// D + beta E.
    pub fn stability_matrix(&self) -> Mat {
        self.d.add_scaled(self.beta, &self.e)
    }
}

/// Builds M, A, B, C, D, E at the regular N-gon.
pub fn build_blocks(n: usize, beta: f64) -> BlockMatrices {
    assert!(n >= 3, "linearization needs N >= 3");
    let theta = PI / n as f64;
    let (_, lambda_1) = regular_constants(n);

    let odd = |k: usize| (2.0 * k as f64 + 1.0) * theta;
    let sin_w: Vec<f64> = (0..n).map(|k| odd(k).sin().powi(2)).collect();
    let cos_w: Vec<f64> = (0..n).map(|k| odd(k).cos().powi(2)).collect();
    let cs_w: Vec<f64> = (0..n).map(|k| -odd(k).cos() * odd(k).sin()).collect();

    let m = cycle_matrix(&vec![1.0; n]);
    let a = cycle_matrix(&sin_w);
    let b = cycle_matrix(&cos_w);
    let c = cycle_matrix(&cs_w);

    let zero = Mat::zeros(n, n);
    let d = Mat::from_blocks(&m, &zero, &zero, &m).add_scaled(-lambda_1, &Mat::identity(2 * n));
    let e = Mat::from_blocks(&a, &c, &c, &b);

    BlockMatrices { n, beta, theta_param: theta, lambda_1, m, a, b, c, d, e }
}

/// X E X^T through the squared difference form
/// -sum_k [sin((2k+1)theta) dx_k^r - cos((2k+1)theta) dx_k^i]^2, always <= 0.
pub fn e_quadratic_form(x: &[f64], blocks: &BlockMatrices) -> f64 {
    let n = blocks.n;
    assert_eq!(x.len(), 2 * n, "flattened vector must have length 2N");
    let theta = blocks.theta_param;
    -(0..n)
        .map(|k| {
            let next = (k + 1) % n;
            let dr = x[next] - x[k];
            let di = x[n + next] - x[n + k];
            let phase = (2.0 * k as f64 + 1.0) * theta;
            (phase.sin() * dr - phase.cos() * di).powi(2)
        })
        .sum::<f64>()
}

/// Polygon -> (x^r, x^i) flattened coordinates.
pub fn flatten(p: &Polygon) -> Vec<f64> {
    let n = p.n();
    let mut out = Vec::with_capacity(2 * n);
    out.extend(p.vertices().iter().map(|z| z.re));
    out.extend(p.vertices().iter().map(|z| z.im));
    out
}

/// Inverse of [`flatten`].
pub fn unflatten(x: &[f64]) -> Result<Polygon> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::invalid("flattened vector must have even length"));
    }
    let n = x.len() / 2;
    Polygon::new((0..n).map(|j| Complex64::new(x[j], x[n + j])).collect())
}

/// Rescaled flow velocity in flattened coordinates.
pub fn rescaled_velocity_flat(x: &[f64], beta: f64) -> Result<Vec<f64>> {
    let p = unflatten(x)?;
    let v = rescaled_velocity(&p, beta);
    let n = p.n();
    let mut out = Vec::with_capacity(2 * n);
    out.extend(v.iter().map(|z| z.re));
    out.extend(v.iter().map(|z| z.im));
    Ok(out)
}

/// Central-difference Jacobian of the rescaled velocity field at `x`.
pub fn fd_jacobian_at(x: &[f64], beta: f64, h: f64) -> Result<Mat> {
    if !(h > 0.0) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let dim = x.len();
    let mut jac = Mat::zeros(dim, dim);
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for j in 0..dim {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        let fp = rescaled_velocity_flat(&xp, beta)?;
        let fm = rescaled_velocity_flat(&xm, beta)?;
        for i in 0..dim {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
        xp[j] = x[j];
        xm[j] = x[j];
    }
    Ok(jac)
}

/// Central-difference Jacobian at the regular N-gon P_1; matches D + beta E
/// to ~1e-6 in max-entry norm for h = 1e-6.
pub fn fd_jacobian(n: usize, beta: f64, h: f64) -> Result<Mat> {
    let p1 = Polygon::regular(n, 1)?;
    fd_jacobian_at(&flatten(&p1), beta, h)
}

/// Analytic center-space vectors, flattened: i P_1 always, plus the
/// orientation-reversed polygon conj(P_1) when N = 4. All are annihilated
/// by D + beta E.
pub fn center_space_vectors(n: usize) -> Vec<Vec<f64>> {
    let theta = PI / n as f64;
    // i P_1 has entries (-sin 2k theta, cos 2k theta).
    let mut i_p1 = Vec::with_capacity(2 * n);
    i_p1.extend((0..n).map(|k| -(2.0 * k as f64 * theta).sin()));
    i_p1.extend((0..n).map(|k| (2.0 * k as f64 * theta).cos()));
    let mut out = vec![i_p1];
    if n == 4 {
        // conj(P_1): entries (cos 2k theta, -sin 2k theta).
        let mut conj = Vec::with_capacity(2 * n);
        conj.extend((0..n).map(|k| (2.0 * k as f64 * theta).cos()));
        conj.extend((0..n).map(|k| -(2.0 * k as f64 * theta).sin()));
        out.push(conj);
    }
    out
}

/// Eigenvalues of D + beta E split into unstable / center / stable spaces.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub beta: f64,
    pub zero_threshold: f64,
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    pub dim_unstable: usize,
    pub dim_center: usize,
    pub dim_stable: usize,
    /// Columns spanning the unstable space.
    pub unstable_basis: Vec<Vec<f64>>,
    /// Columns spanning the center space.
    pub center_basis: Vec<Vec<f64>>,
    /// |(D + beta E) v| for each analytic center vector v (unit norm).
    pub center_residuals: Vec<f64>,
    /// Max-entry difference between the finite-difference Jacobian at P_1
    /// and D + beta E.
    pub fd_jacobian_max_err: f64,
    /// |largest stable eigenvalue|: the empirical gap below zero.
    pub spectral_gap: f64,
}

impl SpectralReport {
    /// JSON layout: {N, beta, eigenvalues, dims: {...}, checks: {...}}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.n,
            "beta": self.beta,
            "eigenvalues": self.eigenvalues,
            "dims": {
                "unstable": self.dim_unstable,
                "center": self.dim_center,
                "stable": self.dim_stable,
            },
            "checks": {
                "zero_threshold": self.zero_threshold,
                "fd_jacobian_max_err": self.fd_jacobian_max_err,
                "center_residuals": self.center_residuals,
                "spectral_gap": self.spectral_gap,
            },
        })
    }
}

/// Eigendecomposition of D + beta E partitioned against `zero_threshold`
/// (default 1e-8 times the Frobenius norm).
///
/// Eigenvalues within a factor 10 of the threshold must be vouched for by
/// the analytic center vectors, otherwise the classification fails with
/// [`Error::AmbiguousSpectrum`].
pub fn classify_spectrum(n: usize, beta: f64, zero_threshold: Option<f64>) -> Result<SpectralReport> {
    if !(beta > 0.0) {
        return Err(Error::invalid("spectral classification needs beta > 0"));
    }
    let blocks = build_blocks(n, beta);
    let s = blocks.stability_matrix();
    let s_norm = s.frobenius_norm();
    let threshold = zero_threshold.unwrap_or(1e-8 * s_norm);
    if !(threshold > 0.0) {
        return Err(Error::invalid("zero threshold must be positive"));
    }

    let eig = symmetric_eigs(&s)?;
    let mut unstable = Vec::new();
    let mut center = Vec::new();
    let mut stable = Vec::new();
    for (idx, &lambda) in eig.values.iter().enumerate() {
        if lambda > threshold {
            unstable.push(idx);
        } else if lambda >= -threshold {
            center.push(idx);
        } else {
            stable.push(idx);
        }
    }

    // Analytic center-space verification.
    let analytic = center_space_vectors(n);
    let mut center_residuals = Vec::with_capacity(analytic.len());
    let mut analytic_captured = true;
    for v in &analytic {
        let norm = vec_norm(v);
        let unit: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let image = s.matvec(&unit);
        center_residuals.push(vec_norm(&image));
        // Projection of the analytic vector onto the numeric center span.
        let mut captured = 0.0;
        for &idx in &center {
            let col = eig.vectors.column(idx);
            captured += vec_dot(&unit, &col).powi(2);
        }
        if captured < 1.0 - 1e-8 {
            analytic_captured = false;
        }
    }
    let center_verified = analytic_captured && center.len() == analytic.len();

    // Any eigenvalue near the threshold needs the center verification to
    // stand behind the classification.
    for &lambda in &eig.values {
        let mag = lambda.abs();
        if mag >= threshold / 10.0 && mag <= threshold * 10.0 && !center_verified {
            return Err(Error::AmbiguousSpectrum { eigenvalue: lambda, threshold });
        }
    }
    if !center_verified {
        return Err(Error::AmbiguousSpectrum {
            eigenvalue: center.first().map(|&i| eig.values[i]).unwrap_or(0.0),
            threshold,
        });
    }

    let spectral_gap = stable.first().map(|&i| eig.values[i].abs()).unwrap_or(0.0);
    let fd = fd_jacobian(n, beta, FD_JACOBIAN_STEP)?;
    let fd_jacobian_max_err = fd.max_abs_diff(&s);

    Ok(SpectralReport {
        n,
        beta,
        zero_threshold: threshold,
        eigenvalues: eig.values.clone(),
        dim_unstable: unstable.len(),
        dim_center: center.len(),
        dim_stable: stable.len(),
        unstable_basis: unstable.iter().map(|&i| eig.vectors.column(i)).collect(),
        center_basis: center.iter().map(|&i| eig.vectors.column(i)).collect(),
        center_residuals,
        fd_jacobian_max_err,
        spectral_gap,
    })
}
