use thiserror::Error;

/// Errors raised by measure, divergence, density and scoring operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability vector is empty")]
    Empty,

    #[error("mass at index {index} is not a finite value in [0, 1]: {value}")]
    MassOutOfRange { index: usize, value: f64 },

    #[error("masses sum to {sum}, not 1 (tolerance {tolerance:e})")]
    NotNormalized { sum: f64, tolerance: f64 },

    #[error("weights cannot be normalized: total weight is {0}")]
    ZeroWeight(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{name} must lie in [0, 1], got {value}")]
    Domain { name: &'static str, value: f64 },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("operation requires dimension at least {min}, got {n}")]
    DimensionTooSmall { n: usize, min: usize },

    #[error(
        "point is on the simplex boundary (mass {value} at index {index}); gradient undefined"
    )]
    BoundaryPoint { index: usize, value: f64 },

    #[error("joint distribution is invalid: {0}")]
    InvalidJoint(String),

    #[error("density grid is invalid: {0}")]
    InvalidGrid(String),

    #[error("density grids do not share the same interval and node count")]
    GridMismatch,

    #[error("kernel undefined at node {index} (f = {f}, g = {g})")]
    KernelUndefined { index: usize, f: f64, g: f64 },

    #[error("convergence probe needs at least 2 grid sizes, got {0}")]
    ProbeTooShort(usize),

    #[error("no records to score")]
    NoRecords,

    #[error("unknown scoring rule `{0}`")]
    UnknownRule(String),

    #[error("candidate grid does not contain the true distribution")]
    TruthNotInGrid,

    #[error("resolution must be at least {min}, got {got}")]
    Resolution { got: usize, min: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
