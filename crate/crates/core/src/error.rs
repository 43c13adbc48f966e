use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cokernel is infinite (relation rank {rank} < {dim})")]
    InfiniteCokernel { rank: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("ring axioms violated: {0}")]
    AxiomViolation(String),

    #[error("idempotent decomposition stalled after {attempts} split attempts")]
    DecompositionBoundExceeded { attempts: usize },

    #[error("inverse system did not stabilize within index {n_max}")]
    NotStabilized { n_max: usize },

    #[error("colon/Koszul identification failed: {0}")]
    IdentificationFailure(String),

    #[error("profile entry ({i}, {n}) is inconclusive; raise the search bound")]
    InsufficientBound { i: usize, n: usize },

    #[error("sequence does not generate the unit ideal")]
    NotCovering,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown reference `{0}`")]
    UnknownReference(String),

    #[error("bound violation: {0}")]
    BoundViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
