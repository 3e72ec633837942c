use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge: estimated error {error:e} above tolerance {tolerance:e} after {subdivisions} subdivisions")]
    NonConvergence {
        error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("iteration did not converge: {0}")]
    IterationFailed(String),

    #[error("missed root: expected {expected}, found {found}")]
    MissedRoot { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("grid too coarse: {points} points for {modes} modes (need at least {required})")]
    GridTooCoarse {
        points: usize,
        modes: usize,
        required: usize,
    },

    #[error("wave functions live on different grids")]
    GridMismatch,

    #[error("position {0} is not a grid point of the domain")]
    OutOfDomain(f64),

    #[error("state violates the boundary condition: residual {residual:e} > {tolerance:e}")]
    BoundaryViolation { residual: f64, tolerance: f64 },

    #[error("initial state too wide for the periodic embedding box: {0}")]
    SupportTooWide(String),

    #[error("spectral decomposition captures only {captured} of the norm")]
    TruncatedBasis { captured: f64 },

    #[error("localization region does not intersect the domain")]
    EmptyRegion,

    #[error("tail probability {value:e} cannot be distinguished from noise floor {floor:e}")]
    ResolutionInsufficient { value: f64, floor: f64 },

    #[error("state has weight {weight:e} at occupations above the safe level {level}")]
    UnsafeState { weight: f64, level: usize },

    #[error("displacement amplitude {amplitude} exceeds the truncation limit {limit}")]
    AmplitudeTooLarge { amplitude: f64, limit: f64 },

    #[error("test function is not in the span of the mode basis (residual norm {0:e})")]
    SpanViolation(f64),

    #[error("property assertion failed: {0}")]
    Assertion(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
