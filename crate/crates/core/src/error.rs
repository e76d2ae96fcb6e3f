use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("control and target mode must differ (both {0})")]
    SameMode(&'static str),

    #[error("gain `{0}` must be nonzero")]
    ZeroGain(&'static str),

    #[error("parameter `{0}` must be finite")]
    NonFinite(&'static str),

    #[error("measured quadratures must be one on mode L and one on mode M")]
    InvalidMeasurement,

    #[error("variance {0} is below the vacuum level 1/2")]
    SubVacuum(f64),

    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("quadratic form is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("ill-conditioned Gaussian block (condition number {0:e})")]
    IllConditioned(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid variable assignment: {0}")]
    InvalidAssignment(String),

    #[error("singular linear map")]
    Singular,

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("success probability underflow (zero-success)")]
    Underflow,

    #[error("target success probability {target:e} unreachable: PS ranges over [{ps_lo:e}, {ps_hi:e}] for Q in [{q_lo:e}, {q_hi:e}]")]
    Unreachable {
        target: f64,
        ps_lo: f64,
        ps_hi: f64,
        q_lo: f64,
        q_hi: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
