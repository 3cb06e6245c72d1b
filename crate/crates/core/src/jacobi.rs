//! Cyclic Jacobi eigensolver for real symmetric matrices.
//!
//! Classic two-sided Jacobi rotations (Golub & Van Loan §8.5): sweep over all
//! (p, q) pairs, annihilating each off-diagonal entry with a plane rotation
//! and accumulating the rotations into the eigenvector matrix. Sweeps repeat
//! until the off-diagonal Frobenius norm drops below 1e-13 times the norm of
//! the input. The matrices here are a few hundred square at most, where
//! Jacobi's simplicity and accuracy beat anything fancier.

use crate::error::{Error, Result};
use crate::mat::Mat;

/// Relative symmetry requirement on the input.
pub const SYMMETRY_REL_TOL: f64 = 1e-12;

/// Relative off-diagonal norm at convergence.
pub const OFF_DIAGONAL_REL_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a symmetric matrix: values sorted descending,
/// `vectors.column(i)` is the orthonormal eigenvector of `values[i]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Fails with [`Error::NotSymmetric`] when the asymmetry exceeds
/// `SYMMETRY_REL_TOL` times the Frobenius norm.
pub fn symmetric_eigs(s: &Mat) -> Result<SymmetricEigen> {
    assert!(s.is_square(), "eigendecomposition needs a square matrix");
    let n = s.rows();
    let norm = s.frobenius_norm();
    let sym_tol = SYMMETRY_REL_TOL * norm.max(f64::MIN_POSITIVE);
    let asymmetry = s.max_asymmetry();
    if asymmetry > sym_tol {
        return Err(Error::NotSymmetric { asymmetry, tolerance: sym_tol });
    }

    let mut a = s.clone();
    // Work on the symmetrized copy so rotations preserve symmetry exactly.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = Mat::identity(n);
    let target = OFF_DIAGONAL_REL_TOL * norm;

    let mut off = a.off_diagonal_norm();
    let mut sweeps = 0;
    while off > target && norm > 0.0 {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // Skip rotations that cannot change anything at this scale.
                if apq.abs() < 0.01 * target / (n as f64) {
                    continue;
                }
                let (c, s_rot) = rotation(a[(p, p)], a[(q, q)], apq);
                apply_rotation(&mut a, p, q, c, s_rot);
                accumulate(&mut v, p, q, c, s_rot);
            }
        }
        off = a.off_diagonal_norm();
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("eigenvalues are finite"));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymmetricEigen { values, vectors })
}

/// Stable rotation choice: t = sgn(theta) / (|theta| + sqrt(1 + theta^2)).
fn rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let theta = 0.5 * (aqq - app) / apq;
    let t = if theta.abs() > 1e154 {
        // Avoid overflow in theta^2; limit t -> 1/(2 theta).
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

/// A <- JᵀAJ for the rotation J in the (p, q) plane.
fn apply_rotation(a: &mut Mat, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    for k in 0..n {
        if k != p && k != q {
            let akp = a[(k, p)];
            let akq = a[(k, q)];
            a[(k, p)] = c * akp - s * akq;
            a[(p, k)] = a[(k, p)];
            a[(k, q)] = s * akp + c * akq;
            a[(q, k)] = a[(k, q)];
        }
    }
    let app = a[(p, p)];
    let aqq = a[(q, q)];
    let apq = a[(p, q)];
    a[(p, p)] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
    a[(q, q)] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
}

/// V <- VJ.
fn accumulate(v: &mut Mat, p: usize, q: usize, c: f64, s: f64) {
    let n = v.rows();
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::vec_norm;

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = symmetric_eigs(&Mat::identity(5)).unwrap();
        for v in &eig.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut m = Mat::identity(3);
        m[(0, 1)] = 0.5;
        assert!(matches!(symmetric_eigs(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn two_by_two_closed_form() {
        let mut m = Mat::zeros(2, 2);
        m[(0, 0)] = 2.0;
        m[(1, 1)] = -1.0;
        m[(0, 1)] = 0.5;
        m[(1, 0)] = 0.5;
        // Eigenvalues of [[2, .5], [.5, -1]]: (1 ± sqrt(9 + 1))/2 shifted...
        // tr = 1, det = -2.25, lambda = (1 ± sqrt(1 + 9))/2.
        let disc = (1.0f64 + 9.0).sqrt();
        let expect = [(1.0 + disc) / 2.0, (1.0 - disc) / 2.0];
        let eig = symmetric_eigs(&m).unwrap();
        for (got, want) in eig.values.iter().zip(expect) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn residuals_and_orthonormality() {
        // Deterministic symmetric test matrix.
        let n = 12;
        let m = Mat::from_fn(n, n, |i, j| {
            let (i, j) = (i.min(j) as f64, i.max(j) as f64);
            ((i * 3.7 + j * 1.3).sin() + 0.1 * (i - j).abs()).cos()
        });
        let norm = m.frobenius_norm();
        let eig = symmetric_eigs(&m).unwrap();
        for (idx, &lambda) in eig.values.iter().enumerate() {
            let v = eig.vectors.column(idx);
            let mv = m.matvec(&v);
            let resid: Vec<f64> = mv.iter().zip(&v).map(|(a, b)| a - lambda * b).collect();
            assert!(vec_norm(&resid) <= 1e-10 * norm, "residual too large for eigenvalue {lambda}");
        }
        // Orthonormal columns.
        for i in 0..n {
            for j in i..n {
                let dot: f64 = eig.vectors.column(i).iter().zip(eig.vectors.column(j)).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
        // Sorted descending.
        for w in eig.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }
}
