//! Exogenous-news regime: expectations follow random walks.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{MarketState, NewsParams};

/// Shocks applied in one period. `None` means no news on that channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NewsShocks {
    /// Change to the speculators' mean expected price change.
    pub speculator: Option<f64>,
    /// Change to the investors' mean value.
    pub investor: Option<f64>,
}

impl NewsShocks {
    /// Draw one period of news.
    ///
    /// Each channel always consumes one uniform (the arrival indicator) and
    /// one standard normal, whether or not news arrives, so a stream replays
    /// identically across arrival probabilities.
    pub fn draw<R1, R2>(params: &NewsParams, speculator_rng: &mut R1, investor_rng: &mut R2) -> Self
    where
        R1: Rng + ?Sized,
        R2: Rng + ?Sized,
    {
        Self {
            speculator: draw_channel(params.tau, params.sigma_eps, speculator_rng),
            investor: draw_channel(params.tau_prime, params.sigma_nu, investor_rng),
        }
    }
}

fn draw_channel<R: Rng + ?Sized>(prob: f64, sigma: f64, rng: &mut R) -> Option<f64> {
    let u: f64 = rng.random();
    let z: f64 = StandardNormal.sample(rng);
    (u < prob).then_some(sigma * z)
}

/// Advance a news-regime state by one period and return the price change.
///
/// Agents observe the previous closing price, so
/// `d_t = a_t * dbar_t + b_t * (vbar_t - P_{t-1})` with the expectations
/// already updated by this period's news.
pub fn step_news(state: &mut MarketState, (a_t, b_t): (f64, f64), shocks: NewsShocks) -> f64 {
    if let Some(eps) = shocks.speculator {
        state.dbar += eps;
    }
    if let Some(nu) = shocks.investor {
        state.vbar += nu;
    }
    let change = a_t * state.dbar + b_t * (state.vbar - state.price);
    state.price += change;
    state.t += 1;
    change
}
