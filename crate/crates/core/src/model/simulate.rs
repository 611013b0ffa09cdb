use serde::{Deserialize, Serialize};

use super::{step_news, step_trend, MarketState, ModelError, NewsShocks, Regime, RegimeConfig};
use crate::rng::Streams;

/// One simulated path.
///
/// `prices` and the expectation paths start at period 0, so they are one
/// element longer than `changes` and `returns`. The trend regime has no
/// value or expectation paths; those vectors are empty there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSeries {
    pub changes: Vec<f64>,
    pub prices: Vec<f64>,
    pub values: Vec<f64>,
    pub dbars: Vec<f64>,
    pub returns: Vec<f64>,
    pub seed: u64,
    pub config_label: String,
}

impl SimSeries {
    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    pub fn abs_changes(&self) -> Vec<f64> {
        self.changes.iter().map(|d| d.abs()).collect()
    }

    pub fn abs_returns(&self) -> Vec<f64> {
        self.returns.iter().map(|r| r.abs()).collect()
    }
}

/// Run `config` for `config.steps` periods from the streams seeded by `seed`.
pub fn simulate(config: &RegimeConfig, seed: u64) -> Result<SimSeries, ModelError> {
    config.validate()?;
    let steps = config.steps;
    let mut streams = Streams::new(seed);

    let mut changes = Vec::with_capacity(steps);
    let mut prices = Vec::with_capacity(steps + 1);
    let mut returns = Vec::with_capacity(steps);
    let mut values = Vec::new();
    let mut dbars = Vec::new();
    prices.push(config.initial_price());

    let mut push_change = |prev: f64, change: f64, price: f64, step: usize| {
        let r = change / prev;
        if prev == 0.0 || !r.is_finite() {
            return Err(ModelError::DegenerateRun { step, price: prev });
        }
        changes.push(change);
        prices.push(price);
        returns.push(r);
        Ok(())
    };

    match &config.regime {
        Regime::News(params) => {
            let mut state = MarketState::news(params);
            values.reserve(steps + 1);
            dbars.reserve(steps + 1);
            values.push(state.vbar);
            dbars.push(state.dbar);
            for step in 1..=steps {
                let coeffs = config.coefficients.sample(&mut streams.coefficients);
                let shocks = NewsShocks::draw(
                    params,
                    &mut streams.speculator_news,
                    &mut streams.investor_news,
                );
                let prev = state.price;
                let change = step_news(&mut state, coeffs, shocks);
                push_change(prev, change, state.price, step)?;
                values.push(state.vbar);
                dbars.push(state.dbar);
            }
        }
        Regime::Trend(params) => {
            let mut state = MarketState::trend(params);
            for step in 1..=steps {
                let (a_t, _) = config.coefficients.sample(&mut streams.coefficients);
                let prev = state.price;
                let change = step_trend(&mut state, params, a_t, &mut streams.trend);
                push_change(prev, change, state.price, step)?;
            }
        }
    }

    Ok(SimSeries {
        changes,
        prices,
        values,
        dbars,
        returns,
        seed,
        config_label: config.label.clone(),
    })
}

/// Relative price changes `(P_t − P_{t−1}) / P_{t−1}`.
///
/// A zero price at index `i` makes return `i` (the one that divides by it)
/// undefined and is reported with that index.
pub fn returns_from_prices(prices: &[f64]) -> Result<Vec<f64>, ModelError> {
    if prices.len() < 2 {
        return Err(ModelError::TooFewPrices(prices.len()));
    }
    prices
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            if w[0] == 0.0 {
                Err(ModelError::ZeroPrice { index: i })
            } else {
                Ok((w[1] - w[0]) / w[0])
            }
        })
        .collect()
}
