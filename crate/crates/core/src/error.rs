use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid coupling matrix: {0}")]
    InvalidCoupling(String),

    #[error("invalid hierarchy spec: {0}")]
    InvalidHierarchy(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("problem too large for exact expansion: {size} terms exceeds cap {cap}")]
    CapExceeded { size: u128, cap: usize },

    #[error("non-integer total frequency {0}: corrupted input")]
    NonIntegerFrequency(f64),

    #[error("matching instance too large: {n} sites exceeds DP cap {cap}")]
    MatchingTooLarge { n: usize, cap: usize },

    #[error("coupling is not a chain: {0}")]
    NotAChain(String),

    #[error("coupling does not match the hierarchy spec")]
    HierarchyMismatch,

    #[error("delta imaginary; bound violated: theta^2 = {theta_sq} > (e^K+1)/2 = {limit}")]
    DeltaImaginary { theta_sq: f64, limit: f64 },

    #[error("root finding did not converge after {iterations} iterations: residual {residual:e}")]
    RootsNotConverged {
        iterations: usize,
        residual: f64,
        /// Best iterate at the point of giving up.
        best: Vec<num_complex::Complex64>,
    },

    #[error("grid must be nonempty and monotone")]
    InvalidGrid(String),

    #[error("at grid index {index}: {source}")]
    AtGridPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
