use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need {needed} bodies for this operation, got {got}")]
    ArityMismatch { needed: usize, got: usize },

    #[error("input is degenerate: affine dimension {affine_dim} < ambient {ambient_dim}")]
    DegenerateInput {
        affine_dim: usize,
        ambient_dim: usize,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("direction vector is numerically zero")]
    ZeroDirection,

    #[error("matrix is singular or near-singular")]
    SingularMatrix,

    #[error("mixed volume is negative beyond tolerance: value {value:e}, scale {scale:e}")]
    NegativeMixedVolume { value: f64, scale: f64 },

    #[error("measure is not centered: |Σ a_i u_i| = {defect:e} exceeds tolerance")]
    NotCentered { defect: f64 },

    #[error("measure cannot be balanced: correction drives weights negative")]
    CannotBalance,

    #[error("atom weight must be positive, got {0}")]
    NonPositiveWeight(f64),

    #[error("halfspace intersection is unbounded or does not contain the origin")]
    UnboundedIntersection,

    #[error("Minkowski solver did not converge: residual {residual:e} after {iterations} iterations")]
    SolverDidNotConverge { residual: f64, iterations: usize },

    #[error("hull construction failed: {0}")]
    HullFailure(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
