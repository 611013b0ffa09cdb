//! Continuous power-law tail fitting.
//!
//! For a cutoff `xmin`, the tail `x >= xmin` is modeled as a Pareto law with
//! survival `(x / xmin)^(−alpha)`. Its maximum-likelihood exponent is
//! `alpha = n_tail / Σ ln(x_i / xmin)`, and the cutoff is the observed value
//! whose fit minimizes the Kolmogorov–Smirnov distance to the empirical tail.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::StatsError;

pub const DEFAULT_MIN_TAIL: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Survival exponent: `P(X > x) ~ C x^(−alpha)`.
    pub alpha: f64,
    pub xmin: f64,
    pub ks: f64,
    pub n_tail: usize,
    /// Positive observations the fit was selected from.
    pub n: usize,
    /// `C` in `P(X > x) ≈ C x^(−alpha)` for `x >= xmin`, normalized so the
    /// fitted survival at `xmin` equals the tail fraction `n_tail / n`.
    pub scale: f64,
}

impl PowerLawFit {
    /// Exponent of the density, `alpha + 1`.
    pub fn density_exponent(&self) -> f64 {
        self.alpha + 1.0
    }
}

/// Sorted ascending positive values.
fn positive_sorted(series: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = series.iter().copied().filter(|&x| x > 0.0).collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn fit_power_law(series: &[f64], min_tail: usize) -> Result<PowerLawFit, StatsError> {
    let min_tail = min_tail.max(2);
    let x = positive_sorted(series);
    let n = x.len();
    if n < min_tail {
        return Err(StatsError::InsufficientTail {
            needed: min_tail,
            got: n,
        });
    }
    if x[0] == x[n - 1] {
        return Err(StatsError::AllIdentical);
    }

    // block_start[j] / block_end[j]: first and last index of x[j]'s tie block.
    let mut block_start = vec![0; n];
    let mut block_end = vec![0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && x[j + 1] == x[i] {
            j += 1;
        }
        for k in i..=j {
            block_start[k] = i;
            block_end[k] = j;
        }
        i = j + 1;
    }

    // Logs relative to the sample minimum keep the sums scale-free.
    let logs: Vec<f64> = x.iter().map(|v| (v / x[0]).ln()).collect();
    let mut suffix = vec![0.0; n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1] + logs[j];
    }

    let mut best: Option<(usize, f64, f64)> = None;
    for start in 0..n {
        if block_start[start] != start {
            continue;
        }
        let m = n - start;
        if m < min_tail {
            break;
        }
        let denom = suffix[start] - m as f64 * logs[start];
        if denom <= 0.0 {
            continue;
        }
        let alpha = m as f64 / denom;
        let tail = Tail {
            z: &x[start..],
            block_start: &block_start[start..],
            block_end: &block_end[start..],
            offset: start,
            alpha,
        };
        let best_ks = best.map_or(f64::INFINITY, |b| b.2);
        let ks = tail.ks_distance(best_ks);
        if ks < best_ks {
            best = Some((start, alpha, ks));
        }
    }

    let (start, _, ks) = best.ok_or(StatsError::AllIdentical)?;
    let xmin = x[start];
    let n_tail = n - start;
    // Recompute the exponent from ratios so it only depends on x / xmin.
    let sum: f64 = x[start..].iter().map(|v| (v / xmin).ln()).sum();
    let alpha = n_tail as f64 / sum;
    Ok(PowerLawFit {
        alpha,
        xmin,
        ks,
        n_tail,
        n,
        scale: n_tail as f64 / n as f64 * xmin.powf(alpha),
    })
}

/// A candidate tail `x[offset..]` with its fitted exponent. Block indices
/// are relative to the full sample.
struct Tail<'a> {
    z: &'a [f64],
    block_start: &'a [usize],
    block_end: &'a [usize],
    offset: usize,
    alpha: f64,
}

impl Tail<'_> {
    fn fitted_cdf(&self, j: usize) -> f64 {
        1.0 - (self.z[0] / self.z[j]).powf(self.alpha)
    }

    /// Empirical CDF just below and at `z[j]`.
    fn empirical(&self, j: usize) -> (f64, f64) {
        let m = self.z.len() as f64;
        let f = self.block_start[j] - self.offset;
        let l = self.block_end[j] - self.offset;
        (f as f64 / m, (l + 1) as f64 / m)
    }

    /// Upper bound of the distance over indices `lo..hi`. Both CDFs are
    /// nondecreasing, so the range endpoints bound every interior point.
    fn range_bound(&self, lo: usize, hi: usize) -> f64 {
        let (below_lo, _) = self.empirical(lo);
        let (_, at_hi) = self.empirical(hi - 1);
        (self.fitted_cdf(hi - 1) - below_lo).max(at_hi - self.fitted_cdf(lo))
    }

    /// Sup distance between the empirical tail CDF and the fitted law.
    ///
    /// Index ranges are refined in order of their upper bound and dropped
    /// once the bound cannot raise the running maximum, so the result is
    /// exact. Returns early with a value `>= stop_at` once the distance is
    /// known to reach it.
    fn ks_distance(&self, stop_at: f64) -> f64 {
        const LEAF: usize = 8;
        let mut d: f64 = 0.0;
        let mut heap = BinaryHeap::new();
        let m = self.z.len();
        heap.push(Range {
            bound: self.range_bound(0, m),
            lo: 0,
            hi: m,
        });
        while let Some(Range { bound, lo, hi }) = heap.pop() {
            if bound <= d {
                break;
            }
            if hi - lo <= LEAF {
                for j in lo..hi {
                    let fit = self.fitted_cdf(j);
                    let (below, at) = self.empirical(j);
                    d = d.max(fit - below).max(at - fit);
                }
                if d >= stop_at {
                    return d;
                }
                continue;
            }
            let mid = lo + (hi - lo) / 2;
            for (lo, hi) in [(lo, mid), (mid, hi)] {
                let bound = self.range_bound(lo, hi);
                if bound > d {
                    heap.push(Range { bound, lo, hi });
                }
            }
        }
        d
    }
}

/// Index range ordered by its distance bound.
struct Range {
    bound: f64,
    lo: usize,
    hi: usize,
}

impl PartialEq for Range {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Range {}

impl PartialOrd for Range {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Range {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.lo.cmp(&self.lo))
    }
}

/// Hill estimate from the `k` largest values:
/// `k / Σ_{i=1..k} ln(x_(n−i+1) / x_(n−k))`, order statistics ascending.
pub fn hill_estimator(series: &[f64], k: usize) -> Result<f64, StatsError> {
    let x = positive_sorted(series);
    let n = x.len();
    if k == 0 || k >= n {
        return Err(StatsError::KOutOfRange { k, n });
    }
    let threshold = x[n - k - 1];
    let sum: f64 = x[n - k..].iter().map(|v| (v / threshold).ln()).sum();
    if sum <= 0.0 {
        return Err(StatsError::TiedOrderStatistics);
    }
    Ok(k as f64 / sum)
}
