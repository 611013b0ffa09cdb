//! Simulation and measurement of a heterogeneous-agent market in which
//! speculators and value-investors update their expectations on exogenous
//! news, plus the trend-following counterpart.
//!
//! * [`model`]: the market recursions and [`simulate`].
//! * [`stats`]: autocorrelation, kurtosis, tail curves, power-law fits.
//! * [`experiment`]: scenario presets and multi-seed reports.
//! * [`io`]: config files, price tables and report serialization.

pub mod experiment;
pub mod io;
pub mod model;
pub mod rng;
pub mod stats;

pub use experiment::{
    acf_band, compare_regimes, run_scenario, run_scenario_with, Preset, RegimeComparison, ScenarioPreset,
    ScenarioReport, SeedStats,
};
pub use model::{
    returns_from_prices, simulate, CoefficientModel, ModelError, NewsParams, Regime,
    RegimeConfig, ScalarDist, SimSeries, TrendParams,
};
pub use stats::{AcfResult, PowerLawFit, StatsError, TailCurve};
