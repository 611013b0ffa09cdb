use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use super::ModelError;

/// A real-valued law used for coefficients and trend weights.
///
/// Text form: `exponential:MEAN`, `degenerate:VALUE` or `normal:MEAN:SD`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarDist {
    Exponential { mean: f64 },
    Degenerate { value: f64 },
    Normal { mean: f64, sd: f64 },
}

impl ScalarDist {
    pub fn validate(&self) -> Result<(), ModelError> {
        let ok = match *self {
            ScalarDist::Exponential { mean } => mean.is_finite() && mean > 0.0,
            ScalarDist::Degenerate { value } => value.is_finite(),
            ScalarDist::Normal { mean, sd } => mean.is_finite() && sd.is_finite() && sd >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(ModelError::InvalidDistribution(self.to_string()))
        }
    }

    /// Distributions that can only produce values `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        match *self {
            ScalarDist::Exponential { .. } => true,
            ScalarDist::Degenerate { value } => value >= 0.0,
            ScalarDist::Normal { .. } => false,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ScalarDist::Exponential { mean } => mean,
            ScalarDist::Degenerate { value } => value,
            ScalarDist::Normal { mean, .. } => mean,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ScalarDist::Exponential { mean } => {
                let e: f64 = Exp::new(1.0).expect("unit rate").sample(rng);
                e * mean
            }
            ScalarDist::Degenerate { value } => value,
            ScalarDist::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
        }
    }
}

impl fmt::Display for ScalarDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ScalarDist::Exponential { mean } => write!(f, "exponential:{mean}"),
            ScalarDist::Degenerate { value } => write!(f, "degenerate:{value}"),
            ScalarDist::Normal { mean, sd } => write!(f, "normal:{mean}:{sd}"),
        }
    }
}

impl FromStr for ScalarDist {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::InvalidDistribution(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
        let dist = match parts.as_slice() {
            ["exponential", m] => ScalarDist::Exponential { mean: num(m)? },
            ["degenerate", v] => ScalarDist::Degenerate { value: num(v)? },
            ["normal", m, sd] => ScalarDist::Normal {
                mean: num(m)?,
                sd: num(sd)?,
            },
            _ => return Err(bad()),
        };
        dist.validate()?;
        Ok(dist)
    }
}

/// A law on agent counts `N_t`, `M_t`.
///
/// Text form: `degenerate:N` or `poisson:MEAN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CountDist {
    Degenerate { value: u64 },
    Poisson { mean: f64 },
}

impl CountDist {
    pub fn validate(&self) -> Result<(), ModelError> {
        match *self {
            CountDist::Degenerate { .. } => Ok(()),
            CountDist::Poisson { mean } if mean.is_finite() && mean > 0.0 => Ok(()),
            _ => Err(ModelError::InvalidDistribution(self.to_string())),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match *self {
            CountDist::Degenerate { value } => value,
            CountDist::Poisson { mean } => {
                let k: f64 = Poisson::new(mean).expect("validated mean").sample(rng);
                k as u64
            }
        }
    }
}

impl fmt::Display for CountDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CountDist::Degenerate { value } => write!(f, "degenerate:{value}"),
            CountDist::Poisson { mean } => write!(f, "poisson:{mean}"),
        }
    }
}

impl FromStr for CountDist {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::InvalidDistribution(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let dist = match parts.as_slice() {
            ["degenerate", v] => CountDist::Degenerate {
                value: v.parse().map_err(|_| bad())?,
            },
            ["poisson", m] => CountDist::Poisson {
                mean: m.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        dist.validate()?;
        Ok(dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms_parse() {
        assert_eq!(
            "exponential:0.1".parse::<ScalarDist>().unwrap(),
            ScalarDist::Exponential { mean: 0.1 }
        );
        assert_eq!(
            " normal : 0 : 2 ".parse::<ScalarDist>().unwrap(),
            ScalarDist::Normal { mean: 0.0, sd: 2.0 }
        );
        assert_eq!(
            "poisson:3.5".parse::<CountDist>().unwrap(),
            CountDist::Poisson { mean: 3.5 }
        );
        assert!("exponential:-1".parse::<ScalarDist>().is_err());
        assert!("uniform:0:1".parse::<ScalarDist>().is_err());
        assert!("degenerate:-2".parse::<CountDist>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for d in [
            ScalarDist::Exponential {
                mean: 6f64.powf(-1.0 / 3.0),
            },
            ScalarDist::Degenerate { value: -0.25 },
            ScalarDist::Normal { mean: 1e-7, sd: 3.0 },
        ] {
            assert_eq!(d.to_string().parse::<ScalarDist>().unwrap(), d);
        }
    }
}
