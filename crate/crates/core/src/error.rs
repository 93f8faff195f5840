//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("function must have at least one atom")]
    EmptyFunction,
    #[error("atom values and masses must be finite")]
    NonFinite,
    #[error("atom mass must lie in (0, 1]: got {0}")]
    InvalidMass(f64),
    #[error("atom masses must sum to 1: got {0}")]
    MassSum(f64),
    #[error("sample count m must be at least 1")]
    ZeroSampleCount,
    #[error("threshold must be nonnegative: got {0}")]
    NegativeThreshold(f64),
    #[error("set mass must lie in (0, 1]: got {0}")]
    InvalidQuantile(f64),
    #[error("probability must lie in [0, 1]: got {0}")]
    InvalidProbability(f64),
    #[error("Monte Carlo estimate needs at least 2 trials: got {0}")]
    TooFewTrials(u64),

    #[error("coefficient list must have odd length 2n+1: got {0}")]
    EvenCoefficientCount(usize),
    #[error("polynomial is not real-valued")]
    NotRealValued,
    #[error("operation requires polynomial order n >= 1")]
    ZeroOrder,
    #[error("net must contain at least one point")]
    EmptyNet,
    #[error("fine factor must be at least {min}: got {got}")]
    FineFactorTooSmall { min: usize, got: usize },

    #[error("moment bound M = {bound} violates E|xi|^3 <= M^3 (minimum {min})")]
    MomentBound { bound: f64, min: f64 },
    #[error("coefficient vector must be nonzero and nonempty")]
    ZeroCoefficients,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial degree must be at least 2 for the log normalization")]
    DegenerateLog,
    #[error("function system fails its condition gate: {0}")]
    ConditionGate(String),

    #[error("sign entries must be +1 or -1")]
    InvalidSign,
    #[error("dyadic level k must be at least 1")]
    ZeroLevel,
    #[error("2^-k = {mass:e} is below the finest atom mass {min_mass:e}; use a finer net")]
    NetTooCoarse { mass: f64, min_mass: f64 },
    #[error("k_max = {got} exceeds log2(n) = {max}")]
    LevelOutOfRange { got: u32, max: u32 },
    #[error("sign search needs at least one attempt")]
    ZeroAttempts,
    #[error("beta must lie in [0, 1/2): got {0}")]
    InvalidBeta(f64),
    #[error("seminorm probe failed: {0}")]
    SeminormProbe(String),

    #[error("CSV error at line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
