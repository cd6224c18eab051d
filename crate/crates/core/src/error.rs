use thiserror::Error;

/// Errors raised by the geometric kernels and the verification drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least {1}")]
    InvalidDimension(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {point:?} lies outside the safe chart domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("finite-difference step {0} underflows at this point")]
    StepUnderflow(f64),

    #[error("transport path leaves the chart domain at {point:?}")]
    PathExitsDomain { point: Vec<f64> },

    #[error("ODE integration produced a non-finite value")]
    IntegratorFailure,

    #[error("seed spinor must be nonzero")]
    ZeroSeed,

    #[error("fields do not share a chart and Clifford representation")]
    RepMismatch,

    #[error("no closed-form derivative available for this field")]
    NoAnalyticDerivative,

    #[error("branch precondition violated: {0}")]
    BranchPrecondition(String),

    #[error("precondition `{what}` violated: residual {residual:e} exceeds tolerance {tolerance:e}")]
    PreconditionViolated {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("sample set is empty")]
    EmptySamples,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("malformed config: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
