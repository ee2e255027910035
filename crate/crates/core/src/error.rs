use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("dyadic index {q} outside [-1, {q_max}]")]
    BlockOutOfRange { q: i32, q_max: i32 },

    #[error("partition residual {residual:e} exceeds tolerance {tol:e}")]
    PartitionResidual { residual: f64, tol: f64 },

    #[error("invalid exponent {0}: must be >= 1")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("positivity lost: minimum {min:e}")]
    PositivityLost { min: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("non-positive sample {value:e} at t = {t}")]
    NonPositiveSample { t: f64, value: f64 },

    #[error("zero norm in normalization: {0}")]
    ZeroNorm(String),

    #[error("operation requires dim {required}, got {got}")]
    UnsupportedDimension { required: &'static str, got: usize },

    #[error("t = {t} is at or past the Riccati blow-up time {blowup}")]
    PastBlowupTime { t: f64, blowup: f64 },

    #[error("field has nonzero mean {0:e}")]
    NonzeroMean(f64),

    #[error("trajectories are not comparable: {0}")]
    MismatchedRuns(String),

    #[error("malformed field dump: {0}")]
    MalformedDump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
