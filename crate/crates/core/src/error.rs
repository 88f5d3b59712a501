use thiserror::Error;

/// Errors produced by the approximation, root-finding and inversion routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation point lies numerically on a pole of `r_n`.
    #[error("evaluation point {z} is within {threshold:e} of a pole (|Q_n(z)| = {magnitude:e})")]
    PoleProximity {
        z: String,
        magnitude: f64,
        threshold: f64,
    },

    /// An argument violates the documented domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    ConvergenceFailure(String),

    /// Simultaneous root refinement stalled before reaching working precision.
    #[error("root refinement for Q_{n} stalled after {iterations} iterations (max correction {correction:e})")]
    RootConvergenceFailure {
        n: usize,
        iterations: usize,
        correction: f64,
    },

    /// A structural guarantee (pole location, distinctness, ...) failed to hold numerically.
    #[error("validation failure: {0}")]
    ValidationFailure(String),

    /// The shifted operator `mu + A` is numerically singular.
    #[error("shift {mu} is (numerically) in the spectrum of -A")]
    SingularShift { mu: String },

    /// Too few usable points for a least-squares fit.
    #[error("insufficient data: {usable} usable points, need at least {required}")]
    InsufficientData { usable: usize, required: usize },

    /// A user-supplied Laplace transform could not be evaluated.
    #[error("transform evaluation failed: {0}")]
    TransformEvaluation(String),

    /// The generator backend does not implement the requested operation.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Malformed matrix/vector text or cache document.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
