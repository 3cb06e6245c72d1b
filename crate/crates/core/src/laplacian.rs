//! Weighted graph Laplacian of a polygon's edge cycle.
//!
//! M_X is the Laplacian of the N-cycle with edge weights l_j^beta. It is
//! symmetric, every row sums to zero, and its off-diagonal support is the
//! cyclic neighbors. Storing only the weights makes those invariants
//! structural instead of numerical: applying M to a constant vector cancels
//! exactly, entry by entry.

use num_complex::Complex64;

use crate::mat::Mat;
use crate::polygon::Polygon;

/// Laplacian of the weighted N-cycle; `weights[j]` couples vertices j and j+1.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianMatrix {
    weights: Vec<f64>,
}

impl LaplacianMatrix {
    pub fn from_weights(weights: Vec<f64>) -> Self {
        assert!(weights.len() >= 3, "cycle Laplacian needs at least 3 vertices");
        LaplacianMatrix { weights }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Entry (i, j) of the dense matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let n = self.n();
        assert!(i < n && j < n);
        if i == j {
            -(self.weights[i] + self.weights[(i + n - 1) % n])
        } else if j == (i + 1) % n {
            self.weights[i]
        } else if i == (j + 1) % n {
            self.weights[j]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> Mat {
        Mat::from_fn(self.n(), self.n(), |i, j| self.get(i, j))
    }

    /// (M x)_j = w_j (x_{j+1} - x_j) + w_{j-1} (x_{j-1} - x_j).
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|j| {
                let next = (j + 1) % n;
                let prev = (j + n - 1) % n;
                self.weights[j] * (x[next] - x[j]) + self.weights[prev] * (x[prev] - x[j])
            })
            .collect()
    }
}

/// M_X with weights l_j^beta.
///
/// The 0^0 convention: a zero-length edge under beta = 0 gets weight 1,
/// continuous with the constant weights of the linear flow. (Rust's `powf`
/// already evaluates 0^0 = 1.) For beta > 0 a zero edge gets weight 0.
pub fn laplacian(p: &Polygon, beta: f64) -> LaplacianMatrix {
    let weights = p.edge_lengths().iter().map(|l| l.powf(beta)).collect();
    LaplacianMatrix::from_weights(weights)
}
