//! Chain summaries: quantile tables, autocorrelations, wrapped histograms.

use std::f64::consts::PI;

use crate::samplers::ChainResult;
use crate::{Error, Result};

/// Per-variable posterior summary in the layout of the experiment tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub mean: f64,
    pub std: f64,
    pub q2_5: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub q97_5: f64,
    pub acceptance_pct: f64,
}

impl SummaryRow {
    pub fn quantiles(&self) -> [f64; 5] {
        [self.q2_5, self.q25, self.q50, self.q75, self.q97_5]
    }
}

/// Empirical quantile by linear interpolation of order statistics
/// (the type-7 convention; recorded so golden tables stay stable).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&p));
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Summarizes one variable of a chain. Needs at least two stored draws.
pub fn summarize(chain: &ChainResult, variable: usize) -> Result<SummaryRow> {
    let values = chain.draws.column(variable);
    if values.len() < 2 {
        return Err(Error::EmptyChain);
    }
    summarize_series(&values, chain.acceptance_rate() * 100.0)
}

/// Same as [`summarize`] for a bare series with an externally supplied
/// acceptance percentage.
pub fn summarize_series(values: &[f64], acceptance_pct: f64) -> Result<SummaryRow> {
    if values.len() < 2 {
        return Err(Error::EmptyChain);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    let std = (ss / (n - 1.0)).sqrt();

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("draws must not contain NaN"));
    Ok(SummaryRow {
        mean,
        std,
        q2_5: quantile(&sorted, 0.025),
        q25: quantile(&sorted, 0.25),
        q50: quantile(&sorted, 0.50),
        q75: quantile(&sorted, 0.75),
        q97_5: quantile(&sorted, 0.975),
        acceptance_pct,
    })
}

/// Autocorrelation function with the standard biased normalization
/// (each lag divided by the lag-0 autocovariance), so `acf[0] = 1`.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if series.len() <= max_lag {
        return Err(Error::InvalidConfig(format!(
            "series of length {} cannot support lag {max_lag}",
            series.len()
        )));
    }
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let c0: f64 = series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return Err(Error::DegenerateSeries);
    }
    let mut out = Vec::with_capacity(max_lag + 1);
    for lag in 0..=max_lag {
        let c: f64 = series[..n - lag]
            .iter()
            .zip(&series[lag..])
            .map(|(a, b)| (a - mean) * (b - mean))
            .sum::<f64>()
            / n as f64;
        out.push(c / c0);
    }
    Ok(out)
}

/// Wrapped histogram density over `(-pi, pi]`: bin mass / (n * width).
/// Returns (bin center, density) pairs; the density integrates to 1.
pub fn circular_histogram_density(angles: &[f64], n_bins: usize) -> Result<Vec<(f64, f64)>> {
    if angles.is_empty() {
        return Err(Error::EmptyChain);
    }
    if n_bins < 2 {
        return Err(Error::InvalidConfig("need at least two bins".into()));
    }
    let width = 2.0 * PI / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    for &a in angles {
        let w = crate::targets::wrap_angle(a);
        // map (-pi, pi] onto [0, n_bins), with pi landing in the last bin
        let mut idx = ((w + PI) / width).floor() as usize;
        if idx >= n_bins {
            idx = n_bins - 1;
        } else if w == -PI + idx as f64 * width && idx > 0 {
            // left edges belong to the lower bin under the half-open wrap
            idx -= 1;
        }
        counts[idx] += 1;
    }
    let n = angles.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let center = -PI + (i as f64 + 0.5) * width;
            (center, c as f64 / (n * width))
        })
        .collect())
}
