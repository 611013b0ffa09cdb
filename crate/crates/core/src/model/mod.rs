//! The two-regime market model.
//!
//! Aggregate excess demand from speculators and value-investors moves the
//! price linearly, which reduces to
//!
//! ```text
//! d_t = a_t * dbar_t + b_t * (vbar_t - P_{t-1}),   a_t = αβN_t,  b_t = γβM_t
//! ```
//!
//! Expectations are either driven by exogenous news (random walks in
//! `dbar` and `vbar`, see [`news`]) or formed by trend following from past
//! price changes (a random-coefficient autoregression, see [`trend`]).

mod dist;
pub mod micro;
pub mod news;
mod simulate;
pub mod trend;

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dist::{CountDist, ScalarDist};
pub use micro::{aggregate_excess_demand, micro_excess_demand, price_change, MicroAgent};
pub use news::{step_news, NewsShocks};
pub use simulate::{returns_from_prices, simulate, SimSeries};
pub use trend::step_trend;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid distribution `{0}`")]
    InvalidDistribution(String),
    #[error("parameter `{name}` out of range: {value} ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("trend lag count K = {k} does not match {len} initial changes")]
    InitialChangesLength { k: usize, len: usize },
    #[error("degenerate run: return at step {step} is not finite (previous price {price})")]
    DegenerateRun { step: usize, price: f64 },
    #[error("zero price at index {index}; return {index} is undefined")]
    ZeroPrice { index: usize },
    #[error("need at least 2 prices, got {0}")]
    TooFewPrices(usize),
}

fn check(name: &'static str, value: f64, ok: bool, expected: &'static str) -> Result<(), ModelError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::OutOfRange {
            name,
            value,
            expected,
        })
    }
}

/// How `(a_t, b_t)` are generated each period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CoefficientModel {
    /// Draw `a_t` and `b_t` directly.
    Direct { a: ScalarDist, b: ScalarDist },
    /// Draw agent counts and scale by the demand/impact sensitivities.
    Composed {
        alpha: f64,
        gamma: f64,
        beta: f64,
        n: CountDist,
        m: CountDist,
    },
}

impl CoefficientModel {
    pub fn direct(a: ScalarDist, b: ScalarDist) -> Result<Self, ModelError> {
        let model = CoefficientModel::Direct { a, b };
        model.validate()?;
        Ok(model)
    }

    pub fn composed(
        alpha: f64,
        gamma: f64,
        beta: f64,
        n: CountDist,
        m: CountDist,
    ) -> Result<Self, ModelError> {
        let model = CoefficientModel::Composed {
            alpha,
            gamma,
            beta,
            n,
            m,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            CoefficientModel::Direct { a, b } => {
                for d in [a, b] {
                    d.validate()?;
                    if !d.is_nonnegative() {
                        return Err(ModelError::InvalidDistribution(format!(
                            "{d} (coefficients must be nonnegative)"
                        )));
                    }
                }
                Ok(())
            }
            CoefficientModel::Composed {
                alpha,
                gamma,
                beta,
                n,
                m,
            } => {
                check("alpha", *alpha, *alpha > 0.0, "> 0")?;
                check("gamma", *gamma, *gamma > 0.0, "> 0")?;
                check("beta", *beta, *beta > 0.0, "> 0")?;
                n.validate()?;
                m.validate()
            }
        }
    }

    /// One fresh draw of `(a_t, b_t)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            CoefficientModel::Direct { a, b } => {
                let a_t = a.sample(rng);
                let b_t = b.sample(rng);
                (a_t, b_t)
            }
            CoefficientModel::Composed {
                alpha,
                gamma,
                beta,
                n,
                m,
            } => {
                let n_t = n.sample(rng) as f64;
                let m_t = m.sample(rng) as f64;
                (alpha * beta * n_t, gamma * beta * m_t)
            }
        }
    }
}

/// Free function form of [`CoefficientModel::sample`].
pub fn sample_coefficients<R: Rng + ?Sized>(model: &CoefficientModel, rng: &mut R) -> (f64, f64) {
    model.sample(rng)
}

/// Parameters of the news-driven regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewsParams {
    /// Probability of speculator news each period.
    pub tau: f64,
    /// Probability of investor news each period.
    pub tau_prime: f64,
    pub sigma_eps: f64,
    pub sigma_nu: f64,
    pub p0: f64,
    pub v0: f64,
    pub dbar0: f64,
}

impl NewsParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        check("tau", self.tau, (0.0..=1.0).contains(&self.tau), "in [0, 1]")?;
        check(
            "tau_prime",
            self.tau_prime,
            (0.0..=1.0).contains(&self.tau_prime),
            "in [0, 1]",
        )?;
        check("sigma_eps", self.sigma_eps, self.sigma_eps >= 0.0, ">= 0")?;
        check("sigma_nu", self.sigma_nu, self.sigma_nu >= 0.0, ">= 0")?;
        check("p0", self.p0, true, "finite")?;
        check("v0", self.v0, true, "finite")?;
        check("dbar0", self.dbar0, true, "finite")
    }
}

/// Parameters of the trend-following regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendParams {
    /// Number of past changes the speculators look at.
    pub k: usize,
    /// Law of each mean weight, redrawn every period.
    pub omega: ScalarDist,
    /// Standard deviation of the Gaussian aggregate noise.
    pub noise_sigma: f64,
    /// `d_0, d_{-1}, ..., d_{1-K}`, most recent first.
    pub d_init: Vec<f64>,
    pub p0: f64,
}

impl TrendParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.k == 0 {
            return Err(ModelError::OutOfRange {
                name: "K",
                value: 0.0,
                expected: ">= 1",
            });
        }
        if self.d_init.len() != self.k {
            return Err(ModelError::InitialChangesLength {
                k: self.k,
                len: self.d_init.len(),
            });
        }
        for &d in &self.d_init {
            check("d_init", d, true, "finite")?;
        }
        self.omega.validate()?;
        check("noise_sigma", self.noise_sigma, self.noise_sigma >= 0.0, ">= 0")?;
        check("p0", self.p0, true, "finite")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    News(NewsParams),
    Trend(TrendParams),
}

/// Everything needed to run one regime for `steps` periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeConfig {
    pub regime: Regime,
    pub coefficients: CoefficientModel,
    pub steps: usize,
    pub label: String,
}

impl RegimeConfig {
    pub fn new(
        regime: Regime,
        coefficients: CoefficientModel,
        steps: usize,
        label: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let config = Self {
            regime,
            coefficients,
            steps,
            label: label.into(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.steps == 0 {
            return Err(ModelError::OutOfRange {
                name: "steps",
                value: 0.0,
                expected: ">= 1",
            });
        }
        self.coefficients.validate()?;
        match &self.regime {
            Regime::News(p) => p.validate(),
            Regime::Trend(p) => p.validate(),
        }
    }

    pub fn initial_price(&self) -> f64 {
        match &self.regime {
            Regime::News(p) => p.p0,
            Regime::Trend(p) => p.p0,
        }
    }
}

/// Mutable state of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketState {
    pub t: usize,
    pub price: f64,
    /// Mean expected price change of speculators.
    pub dbar: f64,
    /// Mean value assigned by investors.
    pub vbar: f64,
    /// Most recent price changes, newest at the front (trend regime only).
    pub last_changes: VecDeque<f64>,
}

impl MarketState {
    pub fn news(params: &NewsParams) -> Self {
        Self {
            t: 0,
            price: params.p0,
            dbar: params.dbar0,
            vbar: params.v0,
            last_changes: VecDeque::new(),
        }
    }

    pub fn trend(params: &TrendParams) -> Self {
        Self {
            t: 0,
            price: params.p0,
            dbar: 0.0,
            vbar: 0.0,
            last_changes: params.d_init.iter().copied().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Channel};

    #[test]
    fn degenerate_direct_coefficients_are_exact() {
        let model = CoefficientModel::direct(
            ScalarDist::Degenerate { value: 0.1 },
            ScalarDist::Degenerate { value: 0.3 },
        )
        .unwrap();
        let mut rng = stream(1, Channel::Coefficients);
        for _ in 0..100 {
            assert_eq!(sample_coefficients(&model, &mut rng), (0.1, 0.3));
        }
    }

    #[test]
    fn composed_coefficients_follow_counts() {
        let model = CoefficientModel::composed(
            1.0,
            2.0,
            0.1,
            CountDist::Degenerate { value: 5 },
            CountDist::Degenerate { value: 0 },
        )
        .unwrap();
        let mut rng = stream(1, Channel::Coefficients);
        assert_eq!(model.sample(&mut rng), (0.5, 0.0));
    }

    #[test]
    fn exponential_coefficient_means() {
        let model = CoefficientModel::direct(
            ScalarDist::Exponential { mean: 0.1 },
            ScalarDist::Exponential { mean: 0.3 },
        )
        .unwrap();
        let mut rng = stream(3, Channel::Coefficients);
        let n = 1_000_000;
        let (mut sa, mut sb) = (0.0, 0.0);
        for _ in 0..n {
            let (a, b) = model.sample(&mut rng);
            assert!(a >= 0.0 && b >= 0.0);
            sa += a;
            sb += b;
        }
        let (ma, mb) = (sa / n as f64, sb / n as f64);
        assert!((ma / 0.1 - 1.0).abs() < 0.01, "mean a = {ma}");
        assert!((mb / 0.3 - 1.0).abs() < 0.01, "mean b = {mb}");
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(CoefficientModel::composed(
            0.0,
            1.0,
            1.0,
            CountDist::Degenerate { value: 1 },
            CountDist::Degenerate { value: 1 }
        )
        .is_err());
        assert!(CoefficientModel::direct(
            ScalarDist::Normal { mean: 0.0, sd: 1.0 },
            ScalarDist::Degenerate { value: 0.3 }
        )
        .is_err());
        let bad = NewsParams {
            tau: 1.5,
            tau_prime: 0.0,
            sigma_eps: 0.1,
            sigma_nu: 1.0,
            p0: 100.0,
            v0: 100.0,
            dbar0: 0.0,
        };
        assert!(matches!(
            bad.validate(),
            Err(ModelError::OutOfRange { name: "tau", .. })
        ));
        let trend = TrendParams {
            k: 2,
            omega: ScalarDist::Degenerate { value: 1.0 },
            noise_sigma: 0.0,
            d_init: vec![1.0],
            p0: 100.0,
        };
        assert_eq!(
            trend.validate(),
            Err(ModelError::InitialChangesLength { k: 2, len: 1 })
        );
    }
}
