//! Trend-following regime: a random-coefficient autoregression in the
//! price changes.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{MarketState, TrendParams};

/// Advance a trend-regime state by one period and return the price change
/// `d_t = a_t * Σ_k ω_k d_{t-k} + e_t`.
///
/// The `K` weights are redrawn every call, followed by one standard normal
/// for the noise.
pub fn step_trend<R: Rng + ?Sized>(
    state: &mut MarketState,
    params: &TrendParams,
    a_t: f64,
    rng: &mut R,
) -> f64 {
    debug_assert_eq!(state.last_changes.len(), params.k);
    let mut signal = 0.0;
    for &past in state.last_changes.iter() {
        signal += params.omega.sample(rng) * past;
    }
    let z: f64 = StandardNormal.sample(rng);
    let change = a_t * signal + params.noise_sigma * z;

    state.last_changes.pop_back();
    state.last_changes.push_front(change);
    state.price += change;
    state.t += 1;
    change
}
