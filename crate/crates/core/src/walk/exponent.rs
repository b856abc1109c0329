//! Growth exponent of `X_n·ℓ` from an ensemble of walks.

use crate::error::{ensure, Result};
use crate::sampling::stats::{linear_fit, median};
use crate::walk::record::WalkRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    /// Least-squares slope of `median log(X_n·ℓ)` against `log n`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(n, median X_n·ℓ)` over the positive samples.
    pub medians: Vec<(f64, f64)>,
    /// Samples with `X_n·ℓ ≤ 0`, excluded from the fit.
    pub excluded: usize,
}

/// Fit from raw projections: `samples[k]` holds the values of `X_{times[k]}·ℓ`
/// across the ensemble.
pub fn exponent_from_samples(times: &[f64], samples: &[Vec<f64>]) -> Result<ExponentFit> {
    ensure!(times.len() == samples.len(), Usage, "one sample set per time is required");
    ensure!(times.len() >= 2, Usage, "at least two horizons are needed");
    ensure!(times.iter().all(|&t| t > 0.0), ParameterDomain, "horizons must be positive");
    let mut excluded = 0;
    let mut medians = Vec::with_capacity(times.len());
    for (&t, xs) in times.iter().zip(samples) {
        let logs: Vec<f64> = xs.iter().filter(|&&x| x > 0.0).map(|x| x.ln()).collect();
        excluded += xs.len() - logs.len();
        ensure!(!logs.is_empty(), Numerical, "no positive displacement at n = {t}");
        medians.push((t, median(&logs).exp()));
    }
    let lx: Vec<f64> = medians.iter().map(|(t, _)| t.ln()).collect();
    let ly: Vec<f64> = medians.iter().map(|(_, m)| m.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&lx, &ly);
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        medians,
        excluded,
    })
}

/// Fit from walk records sharing the same checkpoint times.
pub fn displacement_exponent(records: &[WalkRecord], direction: &[f64]) -> Result<ExponentFit> {
    ensure!(!records.is_empty(), Usage, "empty ensemble");
    let times: Vec<f64> = records[0].checkpoints.iter().map(|(t, _)| *t).collect();
    let mut samples = vec![Vec::with_capacity(records.len()); times.len()];
    for r in records {
        ensure!(
            r.checkpoints.len() == times.len() && r.checkpoints.iter().zip(&times).all(|((t, _), s)| t == s),
            Usage,
            "records must share their checkpoint times"
        );
        ensure!(direction.len() == r.dim, Usage, "direction has the wrong dimension");
        for (k, (_, x)) in r.checkpoints.iter().enumerate() {
            samples[k].push(x.iter().zip(direction).map(|(&c, &l)| c as f64 * l).sum());
        }
    }
    exponent_from_samples(&times, &samples)
}

/// `count` horizons spaced geometrically from `first` to `last`, rounded.
pub fn geometric_grid(first: u64, last: u64, count: usize) -> Vec<u64> {
    if count <= 1 {
        return vec![last];
    }
    let ratio = (last as f64 / first as f64).powf(1.0 / (count - 1) as f64);
    let mut grid: Vec<u64> = (0..count).map(|k| (first as f64 * ratio.powi(k as i32)).round() as u64).collect();
    grid.dedup();
    grid
}
