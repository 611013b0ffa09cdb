use serde::{Deserialize, Serialize};

use super::StatsError;

/// Empirical survival curve `P(X > x)` on the distinct sample values.
///
/// The survival at a value is the fraction of the sample strictly above it,
/// so the smallest of `n` distinct values sits at `(n − 1)/n`. The largest
/// value would get 0, which cannot be drawn on log axes; it is assigned
/// `1 / (2n)` instead, half the last nonzero step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub x: Vec<f64>,
    pub survival: Vec<f64>,
    /// Number of positive values the curve was built from.
    pub n: usize,
    /// Non-positive inputs that were dropped.
    pub dropped: usize,
}

impl TailCurve {
    /// Build a curve from explicit points, e.g. an exact theoretical law.
    pub fn from_points(x: Vec<f64>, survival: Vec<f64>) -> Result<Self, StatsError> {
        if x.len() != survival.len() {
            return Err(StatsError::InvalidCurve("length mismatch".into()));
        }
        let ok_x = x.windows(2).all(|w| w[0] < w[1]) && x.iter().all(|&v| v > 0.0);
        let ok_s = survival.windows(2).all(|w| w[0] > w[1])
            && survival.iter().all(|&s| s > 0.0 && s <= 1.0);
        if !ok_x || !ok_s {
            return Err(StatsError::InvalidCurve(
                "x must be positive and increasing, survival in (0, 1] and decreasing".into(),
            ));
        }
        let n = x.len();
        Ok(Self {
            x,
            survival,
            n,
            dropped: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

pub fn tail_survival(series: &[f64]) -> Result<TailCurve, StatsError> {
    let mut values: Vec<f64> = series.iter().copied().filter(|&v| v > 0.0).collect();
    let dropped = series.len() - values.len();
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n < 2 || values[0] == values[n - 1] {
        return Err(StatsError::TooFewPositive {
            distinct: n.min(1),
            dropped,
        });
    }

    let mut x = Vec::new();
    let mut survival = Vec::new();
    let mut i = 0;
    while i < n {
        let v = values[i];
        let mut j = i;
        while j < n && values[j] == v {
            j += 1;
        }
        x.push(v);
        survival.push((n - j) as f64 / n as f64);
        i = j;
    }
    if let Some(last) = survival.last_mut() {
        *last = 0.5 / n as f64;
    }

    Ok(TailCurve {
        x,
        survival,
        n,
        dropped,
    })
}

/// OLS slope of `ln survival` on `ln x` over the points with `x >= xmin`.
pub fn ls_tail_slope(curve: &TailCurve, xmin: f64) -> Result<f64, StatsError> {
    let pts: Vec<(f64, f64)> = curve
        .x
        .iter()
        .zip(&curve.survival)
        .filter(|(&x, _)| x >= xmin)
        .map(|(&x, &s)| (x.ln(), s.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(StatsError::TooFewTailPoints { got: pts.len() });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_convention() {
        let c = tail_survival(&[4.0, 1.0, 2.0]).unwrap();
        assert_eq!(c.x, vec![1.0, 2.0, 4.0]);
        assert_eq!(c.survival[0], 2.0 / 3.0);
        assert_eq!(c.survival[1], 1.0 / 3.0);
        assert_eq!(c.survival[2], 1.0 / 6.0);
    }

    #[test]
    fn ties_and_nonpositive_inputs() {
        let c = tail_survival(&[0.0, -1.0, 2.0, 2.0, 3.0, 1.0]).unwrap();
        assert_eq!(c.dropped, 2);
        assert_eq!(c.n, 4);
        assert_eq!(c.x, vec![1.0, 2.0, 3.0]);
        assert_eq!(c.survival[..2], [0.75, 0.25]);
    }

    #[test]
    fn too_few_values() {
        assert!(matches!(
            tail_survival(&[5.0, 5.0, 5.0]),
            Err(StatsError::TooFewPositive { .. })
        ));
        assert!(matches!(
            tail_survival(&[1.0, 0.0]),
            Err(StatsError::TooFewPositive { .. })
        ));
    }

    #[test]
    fn exact_pareto_points_give_exact_slope() {
        let alpha = 2.7;
        let x: Vec<f64> = (0..50).map(|i| 1.0 + 0.37 * i as f64).collect();
        let s: Vec<f64> = x.iter().map(|v| v.powf(-alpha)).collect();
        let curve = TailCurve::from_points(x, s).unwrap();
        for xmin in [1.0, 3.0, 10.0] {
            let slope = ls_tail_slope(&curve, xmin).unwrap();
            assert!((slope + alpha).abs() < 1e-9, "{slope}");
        }
    }

    #[test]
    fn two_points_are_not_enough() {
        let curve = TailCurve::from_points(vec![1.0, 2.0, 3.0], vec![0.9, 0.5, 0.1]).unwrap();
        assert_eq!(
            ls_tail_slope(&curve, 2.0),
            Err(StatsError::TooFewTailPoints { got: 2 })
        );
    }
}
