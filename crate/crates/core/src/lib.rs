//! polyflow-core: nonlinear polygon flows in the plane.
//!
//! A planar N-gon evolves by moving each vertex toward its two neighbors
//! with weights given by powers of the adjacent edge lengths,
//!
//! ```text
//! dX_j/dt = l_j^beta (X_{j+1} - X_j) + l_{j-1}^beta (X_{j-1} - X_j),
//! ```
//!
//! the negative gradient flow of the edge-length energy
//! F_alpha = (1/alpha) sum l_j^alpha with alpha = beta + 2. In matrix form
//! dX/dt = M_X X, where M_X is a weighted graph Laplacian of the vertex
//! cycle. Every polygon shrinks to its center of mass; regular polygons do
//! so self-similarly with scale a(t) = (1 - beta l^beta lambda_k t)^(-1/beta).
//!
//! The crate provides:
//!
//! - [`polygon`]: polygon geometry, energies, norms, similarity transforms,
//!   JSON/CSV serialization;
//! - [`mod@laplacian`]: the weighted cycle Laplacian M_X;
//! - [`flow`]: adaptive Runge-Kutta integration of the flow and of its
//!   rescaled variant, dense output, the entropy functional and its
//!   monotonicity-formula residual, dilation sequences, self-similar
//!   closed forms, and edge/angle evolution identities;
//! - [`triangle`]: the N = 3 angle system and its Lyapunov function;
//! - [`linearize`]: the analytic linearization D + beta E at the regular
//!   polygon, a finite-difference cross-check, and spectral classification
//!   into unstable/center/stable spaces;
//! - [`jacobi`]: a self-contained cyclic Jacobi eigensolver;
//! - [`experiments`]: seeded, reproducible experiment procedures;
//! - [`io`]: the CSV/JSON output formats.
//!
//! ```
//! use polyflow_core::{evolve, IntegratorConfig, Polygon};
//!
//! // A regular pentagon shrinks self-similarly toward the origin.
//! let pentagon = Polygon::regular(5, 1)?;
//! let trajectory = evolve(&pentagon, 1.0, 2.0, &IntegratorConfig::default())?;
//! assert!(trajectory.last().energy < trajectory.first().energy);
//! assert!(trajectory.last().center_of_mass.norm() < 1e-9);
//!
//! // The shape stays regular: every edge keeps the same length.
//! let edges = trajectory.last().polygon.edge_lengths();
//! assert!(edges.iter().all(|l| (l - edges[0]).abs() < 1e-9));
//! # Ok::<(), polyflow_core::Error>(())
//! ```

// Validation uses `!(x > 0.0)`-style guards on purpose: they reject NaN,
// which the suggested `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod flow;
pub mod io;
pub mod jacobi;
pub mod laplacian;
pub mod linearize;
pub mod mat;
pub mod polygon;
pub mod rng;
pub mod triangle;

pub use error::{Error, Result};
pub use flow::{
    evolve, evolve_rescaled, velocity, FlowKind, IntegratorConfig, MonotoneChecks, Trajectory,
};
pub use laplacian::{laplacian, LaplacianMatrix};
pub use polygon::{FlowParams, Polygon};

pub use num_complex::Complex64;
