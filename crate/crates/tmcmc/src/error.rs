use thiserror::Error;

/// Errors raised by kernels, targets, and oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("epsilon {eps} lies outside the transformation domain")]
    EpsOutsideDomain { eps: f64 },

    #[error("state outside the transformation domain: {0}")]
    DomainViolation(String),

    /// A target returned NaN. NaN is always a bug in the target, unlike
    /// -inf which marks points outside the support and triggers a reject.
    #[error("target log-density is NaN at {0:?}")]
    NanDensity(Vec<f64>),

    #[error("non-finite gradient encountered at {0:?}")]
    NonFiniteGradient(Vec<f64>),

    #[error("Cholesky factorization failed: {0}")]
    CholeskyFailure(String),

    #[error("move sampling exceeded {0} rejections of the all-hold indicator")]
    MoveRejectionCap(u64),

    #[error("unbalanced move design: {0}")]
    UnbalancedMoves(String),

    #[error("quadrature failed to converge")]
    QuadratureNonConvergence,

    #[error("state space too large: {got} states exceeds the {cap} cap")]
    StateSpaceTooLarge { got: usize, cap: usize },

    #[error("empty chain")]
    EmptyChain,

    #[error("degenerate (zero-variance) series")]
    DegenerateSeries,

    #[error("chain failed at iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_iteration(self, iteration: usize) -> Error {
        Error::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }

    /// True for errors caused by numerical breakdown rather than bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NanDensity(_)
            | Error::NonFiniteGradient(_)
            | Error::CholeskyFailure(_)
            | Error::QuadratureNonConvergence => true,
            Error::AtIteration { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
