//! Agent-level demands, used to check the aggregate price equation.

use serde::{Deserialize, Serialize};

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MicroAgent {
    /// Demand `alpha * expected_change`.
    Speculator { alpha: f64, expected_change: f64 },
    /// Demand `gamma * (expected_value - price)`.
    Investor { gamma: f64, expected_value: f64 },
}

impl MicroAgent {
    pub fn speculator(alpha: f64, expected_change: f64) -> Result<Self, ModelError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(ModelError::OutOfRange {
                name: "alpha",
                value: alpha,
                expected: "> 0",
            });
        }
        Ok(MicroAgent::Speculator {
            alpha,
            expected_change,
        })
    }

    pub fn investor(gamma: f64, expected_value: f64) -> Result<Self, ModelError> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(ModelError::OutOfRange {
                name: "gamma",
                value: gamma,
                expected: "> 0",
            });
        }
        Ok(MicroAgent::Investor {
            gamma,
            expected_value,
        })
    }

    pub fn demand(&self, price: f64) -> f64 {
        match *self {
            MicroAgent::Speculator {
                alpha,
                expected_change,
            } => alpha * expected_change,
            MicroAgent::Investor {
                gamma,
                expected_value,
            } => gamma * (expected_value - price),
        }
    }
}

/// Sum of individual demands at `price`.
pub fn micro_excess_demand(agents: &[MicroAgent], price: f64) -> f64 {
    agents.iter().map(|a| a.demand(price)).sum()
}

/// Excess demand from population means: `αN·dbar + γM·(vbar − P)`.
/// Empty groups contribute nothing, whatever their mean.
pub fn aggregate_excess_demand(
    alpha: f64,
    n: usize,
    dbar: f64,
    gamma: f64,
    m: usize,
    vbar: f64,
    price: f64,
) -> f64 {
    let spec = if n == 0 { 0.0 } else { alpha * n as f64 * dbar };
    let inv = if m == 0 { 0.0 } else { gamma * m as f64 * (vbar - price) };
    spec + inv
}

/// Linear price impact of an excess demand.
pub fn price_change(beta: f64, excess_demand: f64) -> f64 {
    beta * excess_demand
}
