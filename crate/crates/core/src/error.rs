use thiserror::Error;

/// Errors raised while building geometry, kernels, or solving a system.
#[derive(Debug, Error)]
pub enum Error {
    #[error("particle count {count} is not a perfect cube (nearest cubes: {lower} = {lower_side}^3, {upper} = {upper_side}^3)")]
    NotPerfectCube {
        count: u64,
        lower: u64,
        lower_side: u64,
        upper: u64,
        upper_side: u64,
    },

    #[error("kappa must lie in [0, 1), got {0}")]
    InvalidKappa(f64),

    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("lattice index ({0}, {1}, {2}) is outside [0, {3})")]
    IndexOutOfRange(usize, usize, usize, usize),

    #[error("partition of {p_side} subcubes per side exceeds {b} particles per side")]
    PartitionTooFine { p_side: usize, b: usize },

    #[error("Green's function is singular at coincident points")]
    CoincidentPoints,

    #[error("kernel cube needs at least 2 nodes per side, got {0}")]
    LatticeTooSmall(usize),

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("particle density N is zero; no particles cannot change the medium")]
    ZeroDensity,

    #[error("incident direction must have unit length, |alpha| = {0}")]
    InvalidDirection(f64),

    #[error("original refraction coefficient must satisfy Im(n0^2) >= 0, got {0}")]
    LossyBackground(f64),

    #[error("Im(h) = {im} is positive and above the allowed threshold {threshold}; set the force flag to override")]
    PositiveImpedance { im: f64, threshold: f64 },

    #[error("aggregation cell {0} contains no samples")]
    EmptyCell(usize),

    #[error("non-finite value in solver iterate at iteration {0}")]
    NonFinite(usize),

    #[error("invalid option: {0}")]
    InvalidOption(String),
}

pub type Result<T> = std::result::Result<T, Error>;
