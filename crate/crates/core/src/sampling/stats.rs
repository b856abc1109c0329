//! Goodness-of-fit and tail statistics.

use crate::error::{ensure, Result};

/// Asymptotic two-sided 5% coefficient of the Kolmogorov distribution.
pub const KS_COEFF_5PCT: f64 = 1.358;

/// One-sample 5% threshold `1.358/√n`.
pub fn ks_critical(n: usize) -> f64 {
    KS_COEFF_5PCT / (n as f64).sqrt()
}

/// Two-sample 5% threshold `1.358·√((n+m)/(n·m))`.
pub fn ks_two_sample_critical(n: usize, m: usize) -> f64 {
    KS_COEFF_5PCT * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// `sup_x |F_n(x) − F(x)|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    ensure!(!samples.is_empty(), Usage, "KS statistic of an empty sample");
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        // ties: the empirical CDF jumps once per distinct value
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    Ok(d)
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    ensure!(!a.is_empty() && !b.is_empty(), Usage, "KS statistic of an empty sample");
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Default number of order statistics for the Hill estimator: `round(n^{2/3})`.
pub fn default_hill_k(n: usize) -> usize {
    ((n as f64).powf(2.0 / 3.0).round() as usize).clamp(1, n.saturating_sub(1).max(1))
}

/// Hill estimator of `κ` in `P(X > t) ~ t^{−κ}` from the `k` largest samples.
/// Returns `+∞` when the top order statistics coincide (no detectable tail).
pub fn hill_tail_exponent(samples: &[f64], k: usize) -> Result<f64> {
    ensure!(k >= 1 && k < samples.len(), Usage, "Hill k={k} out of range for n={}", samples.len());
    ensure!(samples.iter().all(|&x| x > 0.0), ParameterDomain, "Hill estimator needs positive samples");
    let mut xs = samples.to_vec();
    // k+1 largest at the front
    xs.select_nth_unstable_by(k, |a, b| b.total_cmp(a));
    let threshold = xs[k].ln();
    let h: f64 = xs[..k].iter().map(|x| x.ln() - threshold).sum::<f64>() / k as f64;
    Ok(if h > 0.0 { 1.0 / h } else { f64::INFINITY })
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Unbiased sample standard deviation.
pub fn sample_sd(xs: &[f64]) -> f64 {
    let (_, se) = mean_and_se(xs);
    se * (xs.len() as f64).sqrt()
}

/// Pearson correlation.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Median (of a copy); NaN for an empty slice.
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Least-squares fit `y = a·x + b`; returns `(a, b, r²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (a, b, r2)
}
