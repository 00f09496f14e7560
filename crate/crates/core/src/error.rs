use alloc::string::String;

/// Errors surfaced by the distance engine and the model pipelines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("distribution is not normalized (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("negative or non-finite weight {value} at index {index}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("metric entry ({i}, {j}) is not finite")]
    NonFiniteMetric { i: usize, j: usize },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("positions must be strictly increasing")]
    UnsortedPositions,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalizedState { norm_sqr: f64 },

    #[error("matrix is not {kind} within tolerance (residual {residual:e})")]
    NotStructured { kind: &'static str, residual: f64 },

    #[error("{0} did not converge")]
    NonConvergence(String),

    #[error("grid too coarse: packet width {sigma} below grid step {step}")]
    GridTooCoarse { sigma: f64, step: f64 },

    #[error("seed ({n1}, {theta1}) cannot be lifted onto the energy surface")]
    Unreachable { n1: f64, theta1: f64 },

    #[error("no section crossings before t = {t_max}")]
    NoCrossings { t_max: f64 },

    #[error("integration drift too large: {0}")]
    DriftExceeded(String),

    #[error("Gaussian fit rejected: R^2 = {r_squared} below {threshold}")]
    FitFailed { r_squared: f64, threshold: f64 },

    #[error("level statistics need at least {required} levels, got {found}")]
    TooFewLevels { found: usize, required: usize },

    #[error("fit window is empty or too short ({samples} samples)")]
    EmptyWindow { samples: usize },

    #[error("non-positive distance {value} at sample {index}")]
    NonPositiveDistance { index: usize, value: f64 },

    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

impl Error {
    /// True for failures that come from running out of budget rather than bad input.
    pub fn is_resource_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_) | Error::ResourceLimit(_) | Error::DriftExceeded(_)
        )
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
