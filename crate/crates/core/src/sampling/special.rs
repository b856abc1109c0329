//! Special functions. Thin, domain-checked wrappers over `statrs`.

use statrs::function::{beta, gamma};

use crate::error::{ensure, Result};

pub fn log_gamma(x: f64) -> Result<f64> {
    ensure!(x > 0.0 && x.is_finite(), ParameterDomain, "log_gamma needs x > 0, got {x}");
    Ok(gamma::ln_gamma(x))
}

pub fn digamma(x: f64) -> Result<f64> {
    ensure!(x > 0.0 && x.is_finite(), ParameterDomain, "digamma needs x > 0, got {x}");
    Ok(gamma::digamma(x))
}

pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    ensure!(a > 0.0 && b > 0.0, ParameterDomain, "beta function needs a, b > 0, got ({a}, {b})");
    Ok(beta::ln_beta(a, b))
}

pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    ln_beta(a, b).map(f64::exp)
}

/// Regularized incomplete beta function `I_x(a, b)`; clamps `x` to [0, 1].
pub fn beta_cdf(a: f64, b: f64, x: f64) -> Result<f64> {
    ensure!(a > 0.0 && b > 0.0, ParameterDomain, "beta_cdf needs a, b > 0, got ({a}, {b})");
    ensure!(!x.is_nan(), ParameterDomain, "beta_cdf at NaN");
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    Ok(beta::beta_reg(a, b, x))
}

/// Regularized lower incomplete gamma function `P(shape, x)`.
pub fn gamma_cdf(shape: f64, x: f64) -> Result<f64> {
    ensure!(shape > 0.0, ParameterDomain, "gamma_cdf needs shape > 0, got {shape}");
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(gamma::gamma_lr(shape, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert!((beta_fn(0.5, 1.0).unwrap() - 2.0).abs() < 1e-13);
        assert!((digamma(2.0).unwrap() - digamma(1.0).unwrap() - 1.0).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(digamma(-1.0).is_err());
        assert_eq!(beta_cdf(2.0, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(beta_cdf(2.0, 3.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn digamma_at_one_is_minus_euler_gamma() {
        // Euler–Mascheroni from the slowly converging harmonic series with
        // the Euler–Maclaurin correction terms.
        let n = 1_000_000f64;
        let harmonic: f64 = (1..=1_000_000).rev().map(|k| 1.0 / k as f64).sum();
        let euler = harmonic - n.ln() - 1.0 / (2.0 * n) + 1.0 / (12.0 * n * n);
        assert!((digamma(1.0).unwrap() + euler).abs() < 1e-12);
        assert!((euler - 0.577_215_664_901_532_9).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_matches_factorials_and_stirling() {
        let mut fact = 1f64;
        for n in 1..30u32 {
            let lg = log_gamma(n as f64 + 1.0).unwrap();
            fact *= n as f64;
            assert!((lg - fact.ln()).abs() <= 1e-12 * fact.ln().abs().max(1.0), "n={n}");
        }
        // Stirling series with five correction terms at large x.
        for &x in &[1e3f64, 1e4, 1e5, 1e6] {
            let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
                - 1.0 / (360.0 * x.powi(3))
                + 1.0 / (1260.0 * x.powi(5));
            let lg = log_gamma(x).unwrap();
            assert!(((lg - stirling) / stirling).abs() < 1e-12, "x={x}");
        }
        // Reflection into the small-argument range: Γ(x+1) = xΓ(x).
        for &x in &[1e-3f64, 0.01, 0.1, 0.37] {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = x.ln() + log_gamma(x).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn digamma_recurrence() {
        for i in 1..200 {
            let x = i as f64 * 0.173;
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0), "x={x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn beta_cdf_is_monotone() {
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = beta_cdf(0.3, 2.5, i as f64 / 1000.0).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert_eq!(prev, 1.0);
    }
}
