use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The prox subproblem is not strongly convex for this step.
    #[error("ill-posed prox: step {eta} must be below {limit}")]
    IllPosedProx { eta: f64, limit: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// `A_k` overflowed; the gap is below working precision by then.
    #[error("step-size schedule saturated at A = {a:e}")]
    ScheduleSaturated { a: f64 },

    #[error("iterate became non-finite")]
    Divergence,

    #[error("backtracking failed: Lipschitz estimate {lipschitz:e} exceeds cap")]
    BacktrackingFailure { lipschitz: f64 },

    #[error("operation requires a known optimum")]
    MissingOptimum,

    #[error("at iteration {k}: {source}")]
    AtIteration {
        k: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, k: usize) -> Error {
        match self {
            e @ Error::AtIteration { .. } => e,
            e => Error::AtIteration {
                k,
                source: Box::new(e),
            },
        }
    }

    /// Strips iteration annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIteration { source, .. } => source.root(),
            e => e,
        }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
