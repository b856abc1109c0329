use std::f64::consts::PI;
use std::fmt;

use crate::error::Result;
use crate::sampling::special::{digamma, ln_beta};

use super::renewal::{solomon_speed, BetaEnvParams};

/// Borderline values of `κ₁` are matched with this tolerance.
const KAPPA_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `0 < κ₁ < 1`: `X_n / n^{κ₁}` converges in law.
    SubBallistic,
    /// `κ₁ = 1`: `X_n log n / n → 1/(2β)` in probability.
    Critical,
    /// `1 < κ₁ < 2`: stable fluctuations of order `n^{1/κ₁}` around `vn`.
    Stable,
    /// `κ₁ = 2`: Gaussian fluctuations of order `√(n log n)`, constant unknown.
    Boundary,
    /// `κ₁ > 2`: Gaussian fluctuations of order `√n`.
    Gaussian,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::SubBallistic => "sub-ballistic",
            Regime::Critical => "critical",
            Regime::Stable => "stable",
            Regime::Boundary => "boundary",
            Regime::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Limit-law data for the Beta(α, β) walk on `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeConstants {
    pub params: BetaEnvParams,
    pub kappa1: f64,
    pub regime: Regime,
    pub speed: f64,
    /// Exponent of the normalizing sequence: `κ₁`, 1 (for `n/log n`), `1/κ₁`,
    /// or `1/2`.
    pub exponent: f64,
    /// Constant multiplying the limit variable; `None` when `κ₁ = 2`.
    pub scale: Option<f64>,
}

impl RegimeConstants {
    /// Growth exponent of `X_n` itself, `min(1, κ₁)`.
    pub fn growth_exponent(&self) -> f64 {
        self.kappa1.min(1.0)
    }

    pub fn csv_header() -> &'static str {
        "alpha,beta,kappa1,regime,v,exponent,scale_constant_or_NA"
    }

    pub fn csv_row(&self) -> String {
        let scale = self.scale.map_or_else(|| "NA".to_string(), |c| c.to_string());
        format!(
            "{},{},{},{},{},{},{}",
            self.params.alpha, self.params.beta, self.kappa1, self.regime, self.speed, self.exponent, scale
        )
    }
}

pub fn regime_constants(params: BetaEnvParams) -> Result<RegimeConstants> {
    params.require_transient()?;
    let BetaEnvParams { alpha, beta } = params;
    let k = params.kappa1();
    let speed = solomon_speed(params);
    let psi = digamma(alpha)? - digamma(beta)?;
    let beta_sq = (2.0 * ln_beta(k, beta)?).exp();
    let (regime, exponent, scale) = if (k - 1.0).abs() <= KAPPA_EPS {
        (Regime::Critical, 1.0, Some(1.0 / (2.0 * beta)))
    } else if (k - 2.0).abs() <= KAPPA_EPS {
        (Regime::Boundary, 0.5, None)
    } else if k < 1.0 {
        let c = (PI * k).sin() / (2f64.powf(k) * PI) * beta_sq / psi;
        (Regime::SubBallistic, k, Some(c))
    } else if k < 2.0 {
        let inner = -PI / (PI * k).sin() * psi / beta_sq;
        let c = -2.0 * inner.powf(1.0 / k) * speed.powf(1.0 + 1.0 / k);
        (Regime::Stable, 1.0 / k, Some(c))
    } else {
        let c = 2.0 * (beta * (alpha - 1.0) * k / ((k - 2.0) * (alpha + beta - 1.0).powi(2))).sqrt();
        (Regime::Gaussian, 0.5, Some(c))
    };
    Ok(RegimeConstants {
        params,
        kappa1: k,
        regime,
        speed,
        exponent,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(a: f64, b: f64) -> RegimeConstants {
        regime_constants(BetaEnvParams::new(a, b).unwrap()).unwrap()
    }

    #[test]
    fn tabulated_cases() {
        let g = rc(4.0, 1.0);
        assert_eq!(g.regime, Regime::Gaussian);
        assert_eq!(g.speed, 0.5);
        assert!((g.scale.unwrap() - 1.5).abs() < 1e-12);

        let c = rc(2.0, 1.0);
        assert_eq!(c.regime, Regime::Critical);
        assert_eq!(c.speed, 0.0);
        assert_eq!(c.scale, Some(0.5));

        // sin(π/2) = 1, B(1/2, 1) = 2, Ψ(3/2) − Ψ(1) = 2 − 2 ln 2
        let s = rc(1.5, 1.0);
        assert_eq!(s.regime, Regime::SubBallistic);
        assert_eq!(s.exponent, 0.5);
        let want = 4.0 / (2f64.sqrt() * PI * (2.0 - 2.0 * 2f64.ln()));
        assert!((s.scale.unwrap() - want).abs() < 1e-12);

        let b = rc(3.0, 1.0);
        assert_eq!(b.regime, Regime::Boundary);
        assert!(b.scale.is_none());
        assert!(b.csv_row().ends_with(",NA"));

        // κ₁ = 3/2, β = 1: sin(3π/2) = −1, B(3/2, 1) = 2/3, Ψ(5/2) − Ψ(1) = 8/3 − 2 ln 2
        let st = rc(2.5, 1.0);
        assert_eq!(st.regime, Regime::Stable);
        let v: f64 = 0.5 / 2.5;
        let inner = PI * (8.0 / 3.0 - 2.0 * 2f64.ln()) / (4.0 / 9.0);
        let want = -2.0 * inner.powf(2.0 / 3.0) * v.powf(1.0 + 2.0 / 3.0);
        assert!((st.scale.unwrap() - want).abs() < 1e-12 * want.abs());
        assert!(regime_constants(BetaEnvParams::new(1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn speed_vanishes_exactly_up_to_critical() {
        for (a, b) in [(1.2, 1.0), (2.0, 1.0), (2.0, 1.5), (3.0, 1.0)] {
            let r = rc(a, b);
            assert_eq!(r.speed == 0.0, a <= b + 1.0);
            assert_eq!(r.growth_exponent(), (a - b).min(1.0));
        }
    }
}
