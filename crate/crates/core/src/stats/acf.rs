use serde::{Deserialize, Serialize};

use super::StatsError;

/// Sample autocorrelations at lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfResult {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
    pub n: usize,
    /// Two-sided 95% white-noise band, `1.96 / sqrt(n)`.
    pub band: f64,
}

impl AcfResult {
    /// Fraction of lags in `lags` whose value lies within `scale * band`.
    pub fn fraction_within(&self, lags: std::ops::RangeInclusive<usize>, scale: f64) -> f64 {
        let limit = scale * self.band;
        fraction(self, lags, |v| v.abs() <= limit)
    }

    /// Fraction of lags in `lags` whose value exceeds the band.
    pub fn fraction_above(&self, lags: std::ops::RangeInclusive<usize>) -> f64 {
        let band = self.band;
        fraction(self, lags, |v| v > band)
    }
}

fn fraction(
    acf: &AcfResult,
    lags: std::ops::RangeInclusive<usize>,
    pred: impl Fn(f64) -> bool,
) -> f64 {
    let sel: Vec<f64> = lags.filter_map(|h| acf.values.get(h).copied()).collect();
    if sel.is_empty() {
        return 0.0;
    }
    sel.iter().filter(|&&v| pred(v)).count() as f64 / sel.len() as f64
}

/// `1.96 / sqrt(n)`.
pub fn acf_band(n: usize) -> Result<f64, StatsError> {
    if n < 2 {
        return Err(StatsError::BandSampleTooSmall(n));
    }
    Ok(1.96 / (n as f64).sqrt())
}

/// Biased autocorrelation estimator with global mean and variance:
/// `Σ_t (x_t − x̄)(x_{t+h} − x̄) / Σ_t (x_t − x̄)²`.
pub fn acf(series: &[f64], max_lag: usize) -> Result<AcfResult, StatsError> {
    let n = series.len();
    if n < max_lag + 2 {
        return Err(StatsError::LagTooLarge { max_lag, n });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let denom: f64 = centered.iter().map(|c| c * c).sum();
    if denom <= 0.0 || !denom.is_finite() {
        return Err(StatsError::ZeroVariance);
    }

    let mut values = Vec::with_capacity(max_lag + 1);
    values.push(1.0);
    for h in 1..=max_lag {
        let num: f64 = centered
            .iter()
            .zip(&centered[h..])
            .map(|(a, b)| a * b)
            .sum();
        values.push(num / denom);
    }

    Ok(AcfResult {
        lags: (0..=max_lag).collect(),
        values,
        n,
        band: acf_band(n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Channel};
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = stream(seed, Channel::Trend);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn lag_zero_is_one() {
        let r = acf(&[3.0, 1.0, 4.0, 1.0, 5.0, 9.0], 3).unwrap();
        assert_eq!(r.values[0], 1.0);
        assert_eq!(r.lags, vec![0, 1, 2, 3]);
    }

    #[test]
    fn small_hand_example() {
        // x = [1, 2, 3, 4]: centered [-1.5, -0.5, 0.5, 1.5], Σc² = 5
        // lag 1: (0.75 - 0.25 + 0.75) / 5 = 0.25
        let r = acf(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert!((r.values[1] - 0.25).abs() < 1e-15);
        assert!((r.values[2] + 0.3).abs() < 1e-15);
    }

    #[test]
    fn constant_series_rejected() {
        assert_eq!(acf(&[2.0; 10], 3), Err(StatsError::ZeroVariance));
    }

    #[test]
    fn lag_bound_enforced() {
        assert!(matches!(
            acf(&[1.0, 2.0, 3.0], 2),
            Err(StatsError::LagTooLarge { .. })
        ));
        assert!(acf(&[1.0, 2.0, 3.0, 5.0], 2).is_ok());
    }

    #[test]
    fn band_arithmetic() {
        assert!((acf_band(10_000).unwrap() - 0.0196).abs() < 1e-15);
        assert!((acf_band(4).unwrap() - 0.98).abs() < 1e-15);
        assert_eq!(acf_band(1), Err(StatsError::BandSampleTooSmall(1)));
    }

    #[test]
    fn white_noise_mostly_inside_band() {
        let x = gaussian(100_000, 17);
        let r = acf(&x, 100).unwrap();
        let outside = 1.0 - r.fraction_within(1..=100, 1.0);
        assert!(outside <= 0.10, "outside fraction {outside}");
    }

    #[test]
    fn ar1_matches_closed_form() {
        let phi = 0.5;
        let z = gaussian(100_001, 23);
        let mut x = Vec::with_capacity(100_000);
        let mut prev = 0.0;
        for e in z.into_iter().skip(1) {
            prev = phi * prev + e;
            x.push(prev);
        }
        let r = acf(&x, 10).unwrap();
        for h in 1..=10 {
            let expect = phi.powi(h as i32);
            assert!((r.values[h] - expect).abs() < 0.02, "lag {h}: {}", r.values[h]);
        }
    }
}
