use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration limit exceeded: more than {limit} members")]
    EnumerationLimit { limit: u64 },

    #[error("lattice construction failed: M would exceed cap {cap} for |K| = {size}")]
    LatticeConstruction { cap: u64, size: usize },

    #[error("exactness check guard: |K| = {size} exceeds {limit}")]
    ExactnessGuard { size: usize, limit: usize },

    #[error("rule has no explicit weights (least-squares backend)")]
    NoWeights,

    #[error("step {step} on dims {dims}: {source}")]
    Step {
        step: usize,
        dims: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips step provenance.
    pub fn root(&self) -> &Error {
        match self {
            Error::Step { source, .. } => source.root(),
            e => e,
        }
    }
}
