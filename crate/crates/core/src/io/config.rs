//! `key = value` run configuration.
//!
//! | key | applies to | default |
//! |-----|------------|---------|
//! | `regime` | all, `news` or `trend` | required |
//! | `steps` | all | required |
//! | `label` | all | `custom` |
//! | `coefficients` | all, `direct` or `composed` | `direct` |
//! | `a_dist` | direct | required |
//! | `b_dist` | direct | required for news, `degenerate:0` for trend |
//! | `alpha`, `gamma`, `beta`, `n_dist`, `m_dist` | composed | required |
//! | `tau`, `tau_prime`, `sigma_eps`, `sigma_nu`, `v0` | news | required |
//! | `dbar0` | news | `0` |
//! | `p0` | all | required for news, `100` for trend |
//! | `K`, `omega_dist`, `noise_sigma` | trend | required |
//! | `d_init` | trend, comma-separated, most recent first | `K` zeros |
//! | `seed` | runner | `0` |
//! | `realizations` | runner | `10` |
//! | `max_lag` | runner | `100` |
//! | `min_tail` | runner | `50` |
//!
//! Distributions are written `exponential:MEAN`, `degenerate:VALUE` or
//! `normal:MEAN:SD`; counts `degenerate:N` or `poisson:MEAN`. Lines starting
//! with `#` are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::experiment::{DEFAULT_MAX_LAG, DEFAULT_REALIZATIONS};
use crate::model::{
    CoefficientModel, CountDist, ModelError, NewsParams, Regime, RegimeConfig, ScalarDist,
    TrendParams,
};
use crate::stats::DEFAULT_MIN_TAIL;

const COMMON_KEYS: &[&str] = &[
    "regime",
    "steps",
    "label",
    "coefficients",
    "p0",
    "seed",
    "realizations",
    "max_lag",
    "min_tail",
];
const DIRECT_KEYS: &[&str] = &["a_dist", "b_dist"];
const COMPOSED_KEYS: &[&str] = &["alpha", "gamma", "beta", "n_dist", "m_dist"];
const NEWS_KEYS: &[&str] = &["tau", "tau_prime", "sigma_eps", "sigma_nu", "v0", "dbar0"];
const TREND_KEYS: &[&str] = &["K", "omega_dist", "noise_sigma", "d_init"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { key: String, line: usize },
    #[error("line {line}: key `{key}` does not apply to this configuration ({context})")]
    NotApplicable {
        key: String,
        line: usize,
        context: String,
    },
    #[error("missing required keys: {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error("line {line}: invalid value for `{key}`: {message}")]
    InvalidValue {
        key: String,
        line: usize,
        message: String,
    },
}

/// Settings for batch runs that are not part of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunnerSettings {
    pub seed: u64,
    pub realizations: usize,
    pub max_lag: usize,
    pub min_tail: usize,
}

impl Default for RunnerSettings {
    fn default() -> Self {
        Self {
            seed: 0,
            realizations: DEFAULT_REALIZATIONS,
            max_lag: DEFAULT_MAX_LAG,
            min_tail: DEFAULT_MIN_TAIL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: RegimeConfig,
    pub runner: RunnerSettings,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn line(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |(l, _)| *l)
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn parse<T>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| ConfigError::InvalidValue {
                key: key.to_string(),
                line,
                message: e.to_string(),
            }),
        }
    }

    fn require<T>(&self, key: &str, missing: &mut Vec<String>) -> Result<Option<T>, ConfigError>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        let v = self.parse(key)?;
        if v.is_none() {
            missing.push(key.to_string());
        }
        Ok(v)
    }

    fn invalid(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::InvalidValue {
            key: key.to_string(),
            line: self.line(key),
            message: message.into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let known: Vec<&str> = [COMMON_KEYS, DIRECT_KEYS, COMPOSED_KEYS, NEWS_KEYS, TREND_KEYS].concat();
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or(ConfigError::Malformed { line })?;
        let key = key.trim();
        let value = value.trim();
        if !known.contains(&key) {
            return Err(ConfigError::UnknownKey {
                key: key.to_string(),
                line,
            });
        }
        if map.contains_key(key) {
            return Err(ConfigError::Duplicate {
                key: key.to_string(),
                line,
            });
        }
        map.insert(key.to_string(), (line, value.to_string()));
    }
    Ok(Entries { map })
}

fn reject_foreign(entries: &Entries, allowed: &[&str], context: &str) -> Result<(), ConfigError> {
    for (key, (line, _)) in &entries.map {
        if !allowed.contains(&key.as_str()) {
            return Err(ConfigError::NotApplicable {
                key: key.clone(),
                line: *line,
                context: context.to_string(),
            });
        }
    }
    Ok(())
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<ParsedConfig, ConfigError> {
    let e = tokenize(text)?;
    let mut missing = Vec::new();

    let regime_name: Option<String> = e.require("regime", &mut missing)?;
    let steps: Option<usize> = e.require("steps", &mut missing)?;
    let Some(regime_name) = regime_name else {
        return Err(ConfigError::Missing(missing));
    };
    let news = match regime_name.as_str() {
        "news" => true,
        "trend" => false,
        other => return Err(e.invalid("regime", format!("`{other}` (expected news or trend)"))),
    };
    let mode: String = e.parse("coefficients")?.unwrap_or_else(|| "direct".to_string());
    let composed = match mode.as_str() {
        "direct" => false,
        "composed" => true,
        other => {
            return Err(e.invalid(
                "coefficients",
                format!("`{other}` (expected direct or composed)"),
            ))
        }
    };

    let allowed: Vec<&str> = [
        COMMON_KEYS,
        if composed { COMPOSED_KEYS } else { DIRECT_KEYS },
        if news { NEWS_KEYS } else { TREND_KEYS },
    ]
    .concat();
    reject_foreign(
        &e,
        &allowed,
        &format!("regime = {regime_name}, coefficients = {mode}"),
    )?;

    let coefficients = if composed {
        let alpha: Option<f64> = e.require("alpha", &mut missing)?;
        let gamma: Option<f64> = e.require("gamma", &mut missing)?;
        let beta: Option<f64> = e.require("beta", &mut missing)?;
        let n: Option<CountDist> = e.require("n_dist", &mut missing)?;
        let m: Option<CountDist> = e.require("m_dist", &mut missing)?;
        match (alpha, gamma, beta, n, m) {
            (Some(alpha), Some(gamma), Some(beta), Some(n), Some(m)) => Some(CoefficientModel::Composed {
                alpha,
                gamma,
                beta,
                n,
                m,
            }),
            _ => None,
        }
    } else {
        let a: Option<ScalarDist> = e.require("a_dist", &mut missing)?;
        let b: Option<ScalarDist> = if news {
            e.require("b_dist", &mut missing)?
        } else {
            Some(e.parse("b_dist")?.unwrap_or(ScalarDist::Degenerate { value: 0.0 }))
        };
        match (a, b) {
            (Some(a), Some(b)) => Some(CoefficientModel::Direct { a, b }),
            _ => None,
        }
    };

    let regime = if news {
        let tau: Option<f64> = e.require("tau", &mut missing)?;
        let tau_prime: Option<f64> = e.require("tau_prime", &mut missing)?;
        let sigma_eps: Option<f64> = e.require("sigma_eps", &mut missing)?;
        let sigma_nu: Option<f64> = e.require("sigma_nu", &mut missing)?;
        let p0: Option<f64> = e.require("p0", &mut missing)?;
        let v0: Option<f64> = e.require("v0", &mut missing)?;
        let dbar0: f64 = e.parse("dbar0")?.unwrap_or(0.0);
        match (tau, tau_prime, sigma_eps, sigma_nu, p0, v0) {
            (Some(tau), Some(tau_prime), Some(sigma_eps), Some(sigma_nu), Some(p0), Some(v0)) => {
                Some(Regime::News(NewsParams {
                    tau,
                    tau_prime,
                    sigma_eps,
                    sigma_nu,
                    p0,
                    v0,
                    dbar0,
                }))
            }
            _ => None,
        }
    } else {
        let k: Option<usize> = e.require("K", &mut missing)?;
        let omega: Option<ScalarDist> = e.require("omega_dist", &mut missing)?;
        let noise_sigma: Option<f64> = e.require("noise_sigma", &mut missing)?;
        let p0: f64 = e.parse("p0")?.unwrap_or(100.0);
        let d_init = match e.raw("d_init") {
            None => None,
            Some((_, v)) => Some(
                v.split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<Vec<f64>, _>>()
                    .map_err(|err| e.invalid("d_init", err.to_string()))?,
            ),
        };
        match (k, omega, noise_sigma) {
            (Some(k), Some(omega), Some(noise_sigma)) => Some(Regime::Trend(TrendParams {
                k,
                omega,
                noise_sigma,
                d_init: d_init.unwrap_or_else(|| vec![0.0; k]),
                p0,
            })),
            _ => None,
        }
    };

    if !missing.is_empty() {
        return Err(ConfigError::Missing(missing));
    }
    let (Some(coefficients), Some(regime), Some(steps)) = (coefficients, regime, steps) else {
        unreachable!("all required keys present");
    };

    let label: String = e.parse("label")?.unwrap_or_else(|| "custom".to_string());
    let defaults = RunnerSettings::default();
    let runner = RunnerSettings {
        seed: e.parse("seed")?.unwrap_or(defaults.seed),
        realizations: e.parse("realizations")?.unwrap_or(defaults.realizations),
        max_lag: e.parse("max_lag")?.unwrap_or(defaults.max_lag),
        min_tail: e.parse("min_tail")?.unwrap_or(defaults.min_tail),
    };
    if runner.realizations == 0 {
        return Err(e.invalid("realizations", "must be >= 1"));
    }

    let config = RegimeConfig {
        regime,
        coefficients,
        steps,
        label,
    };
    config.validate().map_err(|err| model_error(&e, err))?;
    Ok(ParsedConfig { config, runner })
}

fn model_error(e: &Entries, err: ModelError) -> ConfigError {
    let key = match &err {
        ModelError::OutOfRange { name, .. } => match *name {
            "alpha" | "gamma" | "beta" | "tau" | "tau_prime" | "sigma_eps" | "sigma_nu" | "p0"
            | "v0" | "dbar0" | "K" | "noise_sigma" | "d_init" | "steps" => *name,
            _ => "regime",
        },
        ModelError::InitialChangesLength { .. } => "d_init",
        ModelError::InvalidDistribution(_) => ["a_dist", "b_dist", "omega_dist", "n_dist", "m_dist"]
            .into_iter()
            .find(|k| e.raw(k).is_some())
            .unwrap_or("coefficients"),
        _ => "regime",
    };
    e.invalid(key, err.to_string())
}

/// Render a configuration so that [`parse_config`] reproduces it exactly.
pub fn render_config(config: &RegimeConfig, runner: &RunnerSettings) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    match &config.regime {
        Regime::News(_) => kv("regime", "news".into()),
        Regime::Trend(_) => kv("regime", "trend".into()),
    }
    kv("label", config.label.clone());
    kv("steps", config.steps.to_string());
    match &config.coefficients {
        CoefficientModel::Direct { a, b } => {
            kv("coefficients", "direct".into());
            kv("a_dist", a.to_string());
            kv("b_dist", b.to_string());
        }
        CoefficientModel::Composed {
            alpha,
            gamma,
            beta,
            n,
            m,
        } => {
            kv("coefficients", "composed".into());
            kv("alpha", alpha.to_string());
            kv("gamma", gamma.to_string());
            kv("beta", beta.to_string());
            kv("n_dist", n.to_string());
            kv("m_dist", m.to_string());
        }
    }
    match &config.regime {
        Regime::News(p) => {
            kv("tau", p.tau.to_string());
            kv("tau_prime", p.tau_prime.to_string());
            kv("sigma_eps", p.sigma_eps.to_string());
            kv("sigma_nu", p.sigma_nu.to_string());
            kv("p0", p.p0.to_string());
            kv("v0", p.v0.to_string());
            kv("dbar0", p.dbar0.to_string());
        }
        Regime::Trend(p) => {
            kv("K", p.k.to_string());
            kv("omega_dist", p.omega.to_string());
            kv("noise_sigma", p.noise_sigma.to_string());
            let d: Vec<String> = p.d_init.iter().map(f64::to_string).collect();
            kv("d_init", d.join(", "));
            kv("p0", p.p0.to_string());
        }
    }
    kv("seed", runner.seed.to_string());
    kv("realizations", runner.realizations.to_string());
    kv("max_lag", runner.max_lag.to_string());
    kv("min_tail", runner.min_tail.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::Preset;
    use proptest::prelude::*;

    #[test]
    fn empty_document_lists_missing_keys() {
        assert_eq!(
            parse_config("").unwrap_err(),
            ConfigError::Missing(vec!["regime".into(), "steps".into()])
        );
        let err = parse_config("regime = news\nsteps = 10\n").unwrap_err();
        let ConfigError::Missing(keys) = err else {
            panic!("{err:?}")
        };
        assert!(keys.contains(&"tau".to_string()) && keys.contains(&"a_dist".to_string()));
    }

    #[test]
    fn out_of_range_names_key_and_line() {
        let mut text = render_config(&Preset::Fig2News.config(100), &RunnerSettings::default());
        text = text.replace("tau = 1\n", "tau = 1.5\n");
        let line = text.lines().position(|l| l.starts_with("tau =")).unwrap() + 1;
        match parse_config(&text).unwrap_err() {
            ConfigError::InvalidValue { key, line: l, .. } => {
                assert_eq!(key, "tau");
                assert_eq!(l, line);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_and_foreign_keys() {
        assert_eq!(
            parse_config("# comment\nregime = news\nspeed = 3\n").unwrap_err(),
            ConfigError::UnknownKey {
                key: "speed".into(),
                line: 3
            }
        );
        let text = render_config(&Preset::Fig2News.config(100), &RunnerSettings::default())
            + "noise_sigma = 0.1\n";
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::NotApplicable { key, .. } if key == "noise_sigma"
        ));
        assert!(matches!(
            parse_config("regime = news\nregime = trend\n").unwrap_err(),
            ConfigError::Duplicate { line: 2, .. }
        ));
        assert_eq!(
            parse_config("regime news\n").unwrap_err(),
            ConfigError::Malformed { line: 1 }
        );
    }

    #[test]
    fn malformed_values() {
        let text = render_config(&Preset::Fig2News.config(100), &RunnerSettings::default())
            .replace("a_dist = exponential:0.1", "a_dist = exponential:x");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::InvalidValue { key, .. } if key == "a_dist"
        ));
        let text = "regime = trend\nsteps = 5\na_dist = degenerate:0.5\nK = 2\nomega_dist = degenerate:1\nnoise_sigma = 0\nd_init = 1\n";
        assert!(matches!(
            parse_config(text).unwrap_err(),
            ConfigError::InvalidValue { key, .. } if key == "d_init"
        ));
    }

    #[test]
    fn trend_defaults() {
        let text = "regime = trend\nsteps = 5\na_dist = degenerate:0.5\nK = 2\nomega_dist = degenerate:1\nnoise_sigma = 0\n";
        let parsed = parse_config(text).unwrap();
        let Regime::Trend(p) = &parsed.config.regime else {
            panic!()
        };
        assert_eq!(p.d_init, vec![0.0, 0.0]);
        assert_eq!(p.p0, 100.0);
        assert_eq!(parsed.runner, RunnerSettings::default());
    }

    #[test]
    fn presets_round_trip() {
        for p in Preset::ALL {
            let config = p.config(20_000);
            let runner = RunnerSettings::default();
            let parsed = parse_config(&render_config(&config, &runner)).unwrap();
            assert_eq!(parsed.config, config);
            assert_eq!(parsed.runner, runner);
        }
    }

    fn scalar() -> impl Strategy<Value = ScalarDist> {
        prop_oneof![
            (1e-6f64..1e3).prop_map(|mean| ScalarDist::Exponential { mean }),
            (0.0f64..1e3).prop_map(|value| ScalarDist::Degenerate { value }),
        ]
    }

    fn regime() -> impl Strategy<Value = Regime> {
        let news = (0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..10.0, 0.0f64..10.0, -1e3f64..1e3, -1e3f64..1e3, -5.0f64..5.0)
            .prop_map(|(tau, tau_prime, sigma_eps, sigma_nu, p0, v0, dbar0)| {
                Regime::News(NewsParams {
                    tau,
                    tau_prime,
                    sigma_eps,
                    sigma_nu,
                    p0,
                    v0,
                    dbar0,
                })
            });
        let trend = (1usize..5, -2.0f64..2.0, 0.0f64..1.0, prop::collection::vec(-1e2f64..1e2, 5), 1.0f64..1e3)
            .prop_map(|(k, w, noise_sigma, d, p0)| {
                Regime::Trend(TrendParams {
                    k,
                    omega: ScalarDist::Normal { mean: w, sd: 0.5 },
                    noise_sigma,
                    d_init: d[..k].to_vec(),
                    p0,
                })
            });
        prop_oneof![news, trend]
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(
            regime in regime(),
            a in scalar(),
            b in scalar(),
            composed in any::<bool>(),
            steps in 1usize..1_000_000,
            seed in any::<u64>(),
            realizations in 1usize..100,
        ) {
            let coefficients = if composed {
                CoefficientModel::Composed {
                    alpha: a.mean() + 0.5,
                    gamma: b.mean() + 0.25,
                    beta: 0.01,
                    n: CountDist::Poisson { mean: 3.0 },
                    m: CountDist::Degenerate { value: 7 },
                }
            } else {
                CoefficientModel::Direct { a, b }
            };
            let config = RegimeConfig { regime, coefficients, steps, label: "prop run".into() };
            let runner = RunnerSettings { seed, realizations, max_lag: 30, min_tail: 10 };
            let parsed = parse_config(&render_config(&config, &runner)).unwrap();
            prop_assert_eq!(parsed.config, config);
            prop_assert_eq!(parsed.runner, runner);
        }
    }
}
