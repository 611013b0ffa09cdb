//! Estimators for the stylized facts of returns.

mod acf;
mod moments;
mod powerlaw;
mod tail;

use thiserror::Error;

pub use acf::{acf, acf_band, AcfResult};
pub use moments::{kurtosis, mean, std_dev};
pub use powerlaw::{fit_power_law, hill_estimator, PowerLawFit, DEFAULT_MIN_TAIL};
pub use tail::{ls_tail_slope, tail_survival, TailCurve};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("max lag {max_lag} too large for series of length {n} (need n >= max_lag + 2)")]
    LagTooLarge { max_lag: usize, n: usize },
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("need at least 2 distinct positive values, got {distinct} ({dropped} non-positive dropped)")]
    TooFewPositive { distinct: usize, dropped: usize },
    #[error("insufficient tail: {got} positive values, need at least {needed}")]
    InsufficientTail { needed: usize, got: usize },
    #[error("all values are identical")]
    AllIdentical,
    #[error("k = {k} out of range for {n} values (need 1 <= k < n)")]
    KOutOfRange { k: usize, n: usize },
    #[error("tied order statistics make the Hill denominator zero")]
    TiedOrderStatistics,
    #[error("only {got} curve points with x >= xmin, need at least 3")]
    TooFewTailPoints { got: usize },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("n = {0} too small for a correlation band (need n >= 2)")]
    BandSampleTooSmall(usize),
}
