//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by geometry, flow integration, and spectral routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A polygon needs at least three vertices.
    #[error("polygon must have at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    /// Consecutive vertices coincide, so the angle at this vertex is undefined.
    #[error("degenerate vertex {index}: consecutive vertices coincide")]
    DegenerateVertex { index: usize },

    /// The angle derivation divides by sin θ, which is (numerically) zero here.
    #[error("collinear vertex {index}: |sin theta| = {sin_theta:e} below threshold")]
    CollinearVertex { index: usize, sin_theta: f64 },

    /// A triangle operation received a triangle with a vanishing angle sine.
    #[error("degenerate triangle: min |sin theta| = {min_sin:e}")]
    DegenerateTriangle { min_sin: f64 },

    /// Triangle operations assume counterclockwise orientation; relabel first.
    #[error("triangle is clockwise oriented (signed area {signed_area:e})")]
    ClockwiseTriangle { signed_area: f64 },

    /// The adaptive integrator exhausted its step budget.
    #[error("step limit exceeded: {max_steps} steps reached at t = {t}")]
    StepLimitExceeded { t: f64, max_steps: usize },

    /// The adaptive step size collapsed below the resolvable scale.
    #[error("step underflow: dt = {dt:e} at t = {t}")]
    StepUnderflow { t: f64, dt: f64 },

    /// Entropy features are defined only for beta > 0.
    #[error("entropy functional requires beta > 0")]
    BetaZero,

    /// Extending a trajectory for a dilation sequence ran out of steps.
    #[error("rescaling schedule needs t = {t_needed}, extension stopped at t = {t_reached}")]
    RangeExceeded { t_needed: f64, t_reached: f64 },

    /// The self-similar residual is undefined at fixed points.
    #[error("zero velocity: polygon is a fixed point of the flow")]
    ZeroVelocity,

    /// The Jacobi eigensolver only accepts symmetric matrices.
    #[error("matrix not symmetric: max asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    /// Jacobi sweeps did not reduce the off-diagonal norm below tolerance.
    #[error("eigensolver did not converge after {sweeps} sweeps (off = {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    /// An eigenvalue sits too close to the zero threshold to classify.
    #[error("ambiguous spectrum: eigenvalue {eigenvalue:e} within a factor 10 of threshold {threshold:e}")]
    AmbiguousSpectrum { eigenvalue: f64, threshold: f64 },

    /// A time outside the trajectory's sampled range was requested.
    #[error("time {t} outside trajectory range [{t_start}, {t_end}]")]
    TimeOutOfRange { t: f64, t_start: f64, t_end: f64 },

    /// Catch-all for argument contract violations.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Parsing a serialized polygon or table failed.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
