use super::StatsError;

pub fn mean(series: &[f64]) -> f64 {
    series.iter().sum::<f64>() / series.len() as f64
}

/// Population standard deviation (1/n normalization). Zero for constant
/// or empty input.
pub fn std_dev(series: &[f64]) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    let m = mean(series);
    let var = series.iter().map(|x| (x - m).powi(2)).sum::<f64>() / series.len() as f64;
    var.sqrt()
}

/// Pearson kurtosis `m4 / m2²` with 1/n central moments (Gaussian = 3).
pub fn kurtosis(series: &[f64]) -> Result<f64, StatsError> {
    let n = series.len();
    if n < 4 {
        return Err(StatsError::TooFewObservations { needed: 4, got: n });
    }
    let m = mean(series);
    let (mut m2, mut m4) = (0.0, 0.0);
    for x in series {
        let c2 = (x - m) * (x - m);
        m2 += c2;
        m4 += c2 * c2;
    }
    m2 /= n as f64;
    m4 /= n as f64;
    if m2 <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok(m4 / (m2 * m2))
}
