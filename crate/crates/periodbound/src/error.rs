//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the spectral calculus, integrators, orbit tools and
/// application calculators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A state vector's length does not match the model dimension, or two
    /// fields live on different grids.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Alignment { expected: usize, got: usize },

    /// A scalar argument violates a documented precondition. The message
    /// names the offending parameter and its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An operator inverse or norm was requested on an empty spectral block.
    #[error("undefined operator: {0}")]
    UndefinedOperator(&'static str),

    /// Integration produced a non-finite state.
    #[error("trajectory diverged at step {step}")]
    Divergence { step: usize },

    /// Not enough usable data to produce an estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Input data violates a mathematical precondition (e.g. nonzero mean
    /// where a zero-mean path is required).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Sampling too coarse for the requested computation.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// No periodic return was found in the trajectory.
    #[error("trajectory is not periodic: {0}")]
    NotPeriodic(String),

    /// A Poincare-section crossing was too close to tangential to trust.
    #[error("ill-conditioned section: crossing angle {angle:.3e} rad below threshold {threshold:.1e}")]
    IllConditionedSection { angle: f64, threshold: f64 },

    /// Newton refinement did not reach the residual target.
    #[error("shooting did not converge after {iterations} iterations (final residual {final_residual:.3e})")]
    Convergence {
        iterations: usize,
        final_residual: f64,
        residual_history: Vec<f64>,
    },

    /// The shooting problem is singular at the supplied guess (equilibrium,
    /// or a rank-deficient Jacobian).
    #[error("degenerate orbit: {0}")]
    DegenerateOrbit(String),
}

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
