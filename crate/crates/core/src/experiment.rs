//! Scenario presets, multi-seed batches and their aggregation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    simulate, CoefficientModel, NewsParams, Regime, RegimeConfig, ScalarDist, SimSeries,
    TrendParams,
};
use crate::stats::{
    self, fit_power_law, kurtosis, ls_tail_slope, std_dev, tail_survival, AcfResult, PowerLawFit,
    TailCurve, DEFAULT_MIN_TAIL,
};

pub use crate::stats::acf_band;

pub const DEFAULT_REALIZATIONS: usize = 10;
pub const DEFAULT_MAX_LAG: usize = 100;
pub const DEFAULT_STEPS: usize = 20_000;
/// Points kept in the pooled tail curve stored in a report.
const TAIL_CURVE_POINTS: usize = 400;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("realizations must be at least 1")]
    NoRealizations,
    #[error("lag {lag} out of range (reports computed up to lag {max_lag})")]
    LagOutOfRange { lag: usize, max_lag: usize },
    #[error("{0}")]
    Unavailable(String),
    #[error("unknown preset `{0}` (expected fig2, fig3, kesten or quiet)")]
    UnknownPreset(String),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// A statistic that may be undefined for a given series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimate<T> {
    Value(T),
    Unavailable(String),
}

impl<T> Estimate<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Estimate::Value(v) => Some(v),
            Estimate::Unavailable(_) => None,
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Estimate::Value(_) => None,
            Estimate::Unavailable(r) => Some(r),
        }
    }
}

impl<T, E: fmt::Display> From<Result<T, E>> for Estimate<T> {
    fn from(r: Result<T, E>) -> Self {
        match r {
            Ok(v) => Estimate::Value(v),
            Err(e) => Estimate::Unavailable(e.to_string()),
        }
    }
}

/// Which path of a run the statistics are computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// Relative price changes; tails are fitted in percent.
    Returns,
    /// Absolute price changes `d_t`.
    Changes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fig2News,
    Fig3ConstantValue,
    KestenTrend,
    QuietControl,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Fig2News,
        Preset::Fig3ConstantValue,
        Preset::KestenTrend,
        Preset::QuietControl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2News => "fig2_news",
            Preset::Fig3ConstantValue => "fig3_constant_value",
            Preset::KestenTrend => "kesten_trend",
            Preset::QuietControl => "quiet_control",
        }
    }

    pub fn series_kind(self) -> SeriesKind {
        match self {
            Preset::KestenTrend => SeriesKind::Changes,
            _ => SeriesKind::Returns,
        }
    }

    /// Mean of the exponential `a_t` for which `E[a^3] = 6 m^3 = 1`.
    pub fn kesten_mean() -> f64 {
        6f64.powf(-1.0 / 3.0)
    }

    pub fn config(self, steps: usize) -> RegimeConfig {
        let exp = |mean| ScalarDist::Exponential { mean };
        let fig2 = NewsParams {
            tau: 1.0,
            tau_prime: 0.1,
            sigma_eps: 0.1,
            sigma_nu: 1.0,
            p0: 100.0,
            v0: 100.0,
            dbar0: 0.0,
        };
        let news_coeffs = CoefficientModel::Direct {
            a: exp(0.1),
            b: exp(0.3),
        };
        let (regime, coefficients) = match self {
            Preset::Fig2News => (Regime::News(fig2), news_coeffs),
            Preset::Fig3ConstantValue => (
                Regime::News(NewsParams {
                    tau_prime: 0.0,
                    ..fig2
                }),
                news_coeffs,
            ),
            Preset::QuietControl => (
                Regime::News(NewsParams {
                    sigma_eps: 0.0,
                    sigma_nu: 0.0,
                    ..fig2
                }),
                news_coeffs,
            ),
            Preset::KestenTrend => (
                Regime::Trend(TrendParams {
                    k: 1,
                    omega: ScalarDist::Degenerate { value: 1.0 },
                    noise_sigma: 0.1,
                    d_init: vec![0.0],
                    p0: 100.0,
                }),
                CoefficientModel::Direct {
                    a: exp(Self::kesten_mean()),
                    b: ScalarDist::Degenerate { value: 0.0 },
                },
            ),
        };
        RegimeConfig {
            regime,
            coefficients,
            steps,
            label: self.name().to_string(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig2" | "fig2_news" => Ok(Preset::Fig2News),
            "fig3" | "fig3_constant_value" => Ok(Preset::Fig3ConstantValue),
            "kesten" | "kesten_trend" => Ok(Preset::KestenTrend),
            "quiet" | "quiet_control" => Ok(Preset::QuietControl),
            other => Err(ExperimentError::UnknownPreset(other.to_string())),
        }
    }
}

/// A named preset together with its concrete configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPreset {
    pub name: Preset,
    pub config: RegimeConfig,
}

impl ScenarioPreset {
    pub fn new(name: Preset) -> Self {
        Self::with_steps(name, DEFAULT_STEPS)
    }

    pub fn with_steps(name: Preset, steps: usize) -> Self {
        Self {
            name,
            config: name.config(steps),
        }
    }
}

/// Statistics of one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub n: usize,
    pub std: f64,
    pub kurtosis: Estimate<f64>,
    /// Fit to the absolute values, multiplied by the tail scale.
    pub tail_fit: Estimate<PowerLawFit>,
    /// Least-squares log-log slope above the fitted cutoff.
    pub ls_slope: Estimate<f64>,
    pub acf: Estimate<AcfResult>,
    pub acf_abs: Estimate<AcfResult>,
}

impl SeriesStats {
    /// `tail_scale` multiplies the absolute values before tail fitting
    /// (100 turns fractional returns into percent).
    pub fn compute(values: &[f64], tail_scale: f64, max_lag: usize, min_tail: usize) -> Self {
        let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        let scaled: Vec<f64> = abs.iter().map(|v| v * tail_scale).collect();
        let tail_fit: Estimate<PowerLawFit> = fit_power_law(&scaled, min_tail).into();
        let ls_slope = match &tail_fit {
            Estimate::Value(fit) => tail_survival(&scaled)
                .and_then(|curve| ls_tail_slope(&curve, fit.xmin))
                .into(),
            Estimate::Unavailable(r) => Estimate::Unavailable(r.clone()),
        };
        Self {
            n: values.len(),
            std: std_dev(values),
            kurtosis: kurtosis(values).into(),
            tail_fit,
            ls_slope,
            acf: stats::acf(values, max_lag).into(),
            acf_abs: stats::acf(&abs, max_lag).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedStats {
    pub seed: u64,
    /// Standard deviation of returns (fractions, not percent); absent for
    /// degenerate runs.
    pub return_std: Option<f64>,
    /// Set when the run stopped early; the statistics are then absent.
    pub degenerate: Option<String>,
    pub stats: Option<SeriesStats>,
}

impl SeedStats {
    fn kurtosis(&self) -> Option<f64> {
        self.stats.as_ref()?.kurtosis.value().copied()
    }

    fn alpha(&self) -> Option<f64> {
        Some(self.stats.as_ref()?.tail_fit.value()?.alpha)
    }

    fn acf(&self) -> Option<&AcfResult> {
        self.stats.as_ref()?.acf.value()
    }

    fn acf_abs(&self) -> Option<&AcfResult> {
        self.stats.as_ref()?.acf_abs.value()
    }
}

/// Location and spread of a per-seed statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub mean: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let (q1, median, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
        Some(Self {
            count: v.len(),
            median,
            q1,
            q3,
            iqr: q3 - q1,
            mean: v.iter().sum::<f64>() / v.len() as f64,
        })
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Cross-seed aggregates; recomputable from the per-seed entries alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub realizations: usize,
    pub completed: usize,
    pub return_std: Option<Summary>,
    pub kurtosis: Option<Summary>,
    pub alpha: Option<Summary>,
    /// Mean over seeds of the series ACF, lags `0..=max_lag`.
    pub mean_acf: Vec<f64>,
    /// Mean over seeds of the absolute-series ACF.
    pub mean_acf_abs: Vec<f64>,
    /// White-noise band for the shortest contributing series.
    pub band: Option<f64>,
    /// Mean per-seed fraction of lags `1..=max_lag` with `|acf| <= band`.
    pub acf_inside_band: Option<f64>,
    /// Fraction of lags `1..=max_lag` where `mean_acf_abs > band`.
    pub acf_abs_above_band: Option<f64>,
}

impl Aggregate {
    /// Fold per-seed results in seed order.
    pub fn from_seeds(per_seed: &[SeedStats]) -> Self {
        let mut seeds: Vec<&SeedStats> = per_seed.iter().collect();
        seeds.sort_by_key(|s| s.seed);

        let finished: Vec<&SeedStats> = seeds.iter().copied().filter(|s| s.stats.is_some()).collect();
        let return_std: Vec<f64> = finished.iter().filter_map(|s| s.return_std).collect();
        let kurt: Vec<f64> = seeds.iter().filter_map(|s| s.kurtosis()).collect();
        let alpha: Vec<f64> = seeds.iter().filter_map(|s| s.alpha()).collect();

        let acfs: Vec<&AcfResult> = seeds.iter().filter_map(|s| s.acf()).collect();
        let abs_acfs: Vec<&AcfResult> = seeds.iter().filter_map(|s| s.acf_abs()).collect();
        let mean_acf = mean_curve(&acfs);
        let mean_acf_abs = mean_curve(&abs_acfs);
        let band = acfs
            .iter()
            .chain(&abs_acfs)
            .map(|a| a.n)
            .min()
            .and_then(|n| acf_band(n).ok());

        let max_lag = mean_acf.len().saturating_sub(1);
        let acf_inside_band = if acfs.is_empty() || max_lag == 0 {
            None
        } else {
            let total: f64 = acfs.iter().map(|a| a.fraction_within(1..=max_lag, 1.0)).sum();
            Some(total / acfs.len() as f64)
        };
        let acf_abs_above_band = match band {
            Some(b) if mean_acf_abs.len() > 1 => {
                let above = mean_acf_abs[1..].iter().filter(|&&v| v > b).count();
                Some(above as f64 / (mean_acf_abs.len() - 1) as f64)
            }
            _ => None,
        };

        Self {
            realizations: per_seed.len(),
            completed: finished.len(),
            return_std: Summary::of(&return_std),
            kurtosis: Summary::of(&kurt),
            alpha: Summary::of(&alpha),
            mean_acf,
            mean_acf_abs,
            band,
            acf_inside_band,
            acf_abs_above_band,
        }
    }
}

fn mean_curve(curves: &[&AcfResult]) -> Vec<f64> {
    let Some(len) = curves.iter().map(|c| c.values.len()).min() else {
        return Vec::new();
    };
    (0..len)
        .map(|h| curves.iter().map(|c| c.values[h]).sum::<f64>() / curves.len() as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub preset: Preset,
    pub label: String,
    pub steps: usize,
    pub base_seed: u64,
    pub max_lag: usize,
    pub min_tail: usize,
    pub series: SeriesKind,
    pub per_seed: Vec<SeedStats>,
    pub aggregate: Aggregate,
    /// Tail fit on the absolute series pooled over all completed seeds.
    pub pooled_fit: Estimate<PowerLawFit>,
    /// Pooled tail curve, thinned for plotting.
    pub pooled_tail: Estimate<TailCurve>,
}

impl ScenarioReport {
    /// Scale applied to absolute values before tail fitting.
    pub fn tail_scale(&self) -> f64 {
        tail_scale(self.series)
    }
}

fn tail_scale(kind: SeriesKind) -> f64 {
    match kind {
        SeriesKind::Returns => 100.0,
        SeriesKind::Changes => 1.0,
    }
}

/// The path of `series` that `kind` selects.
pub fn analyzed(series: &SimSeries, kind: SeriesKind) -> &[f64] {
    match kind {
        SeriesKind::Returns => &series.returns,
        SeriesKind::Changes => &series.changes,
    }
}

/// Run `realizations` seeds starting at `base_seed` and aggregate.
pub fn run_scenario(
    preset: &ScenarioPreset,
    realizations: usize,
    base_seed: u64,
    max_lag: usize,
) -> Result<ScenarioReport, ExperimentError> {
    run_scenario_with(preset, realizations, base_seed, max_lag, DEFAULT_MIN_TAIL)
}

pub fn run_scenario_with(
    preset: &ScenarioPreset,
    realizations: usize,
    base_seed: u64,
    max_lag: usize,
    min_tail: usize,
) -> Result<ScenarioReport, ExperimentError> {
    if realizations == 0 {
        return Err(ExperimentError::NoRealizations);
    }
    preset.config.validate()?;
    let kind = preset.name.series_kind();
    let scale = tail_scale(kind);

    let runs: Vec<(SeedStats, Option<Vec<f64>>)> = (0..realizations as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            match simulate(&preset.config, seed) {
                Ok(series) => {
                    let values = analyzed(&series, kind);
                    let stats = SeriesStats::compute(values, scale, max_lag, min_tail);
                    let pooled: Vec<f64> = values.iter().map(|v| v.abs() * scale).collect();
                    let seed_stats = SeedStats {
                        seed,
                        return_std: Some(std_dev(&series.returns)),
                        degenerate: None,
                        stats: Some(stats),
                    };
                    (seed_stats, Some(pooled))
                }
                Err(e) => (
                    SeedStats {
                        seed,
                        return_std: None,
                        degenerate: Some(e.to_string()),
                        stats: None,
                    },
                    None,
                ),
            }
        })
        .collect();

    let mut pooled = Vec::new();
    let mut per_seed = Vec::with_capacity(realizations);
    for (stats, values) in runs {
        if let Some(v) = values {
            pooled.extend(v);
        }
        per_seed.push(stats);
    }

    let pooled_fit = fit_power_law(&pooled, min_tail).into();
    let pooled_tail = tail_survival(&pooled)
        .map(|c| thin_curve(&c, TAIL_CURVE_POINTS))
        .into();

    Ok(ScenarioReport {
        preset: preset.name,
        label: preset.config.label.clone(),
        steps: preset.config.steps,
        base_seed,
        max_lag,
        min_tail,
        series: kind,
        aggregate: Aggregate::from_seeds(&per_seed),
        per_seed,
        pooled_fit,
        pooled_tail,
    })
}

/// Keep roughly `points` curve points, evenly spaced in log-survival.
pub fn thin_curve(curve: &TailCurve, points: usize) -> TailCurve {
    let len = curve.len();
    if len <= points || points < 2 {
        return curve.clone();
    }
    let first = curve.survival[0].ln();
    let last = curve.survival[len - 1].ln();
    let step = (first - last) / (points - 1) as f64;
    let mut keep = Vec::with_capacity(points + 1);
    let mut next = first;
    for (i, s) in curve.survival.iter().enumerate() {
        if s.ln() <= next || i == len - 1 {
            keep.push(i);
            while s.ln() <= next {
                next -= step;
            }
        }
    }
    TailCurve {
        x: keep.iter().map(|&i| curve.x[i]).collect(),
        survival: keep.iter().map(|&i| curve.survival[i]).collect(),
        n: curve.n,
        dropped: curve.dropped,
    }
}

/// Cross-seed mean absolute-series ACF of two reports at one lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeComparison {
    pub lag: usize,
    pub label_a: String,
    pub label_b: String,
    pub value_a: f64,
    pub value_b: f64,
    /// `value_a − value_b`.
    pub difference: f64,
}

pub fn compare_regimes(
    a: &ScenarioReport,
    b: &ScenarioReport,
    lag: usize,
) -> Result<RegimeComparison, ExperimentError> {
    let at = |r: &ScenarioReport| -> Result<f64, ExperimentError> {
        if lag > r.max_lag {
            return Err(ExperimentError::LagOutOfRange {
                lag,
                max_lag: r.max_lag,
            });
        }
        r.aggregate.mean_acf_abs.get(lag).copied().ok_or_else(|| {
            ExperimentError::Unavailable(format!("no absolute-series ACF in report `{}`", r.label))
        })
    };
    let (value_a, value_b) = (at(a)?, at(b)?);
    Ok(RegimeComparison {
        lag,
        label_a: a.label.clone(),
        label_b: b.label.clone(),
        value_a,
        value_b,
        difference: value_a - value_b,
    })
}
