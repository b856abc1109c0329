use crate::error::{ensure, Result};
use crate::sampling::special::log_gamma;

/// A moment that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Infinite,
}

impl Moment {
    pub fn finite(self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(v),
            Moment::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Moment::Infinite)
    }
}

/// `E[∏ V_i^{ξ_i}]` for `V ~ Dirichlet(α)`:
/// `Γ(Σα) / Γ(Σα + Σξ) · ∏ Γ(α_i + ξ_i) / Γ(α_i)` when every `α_i + ξ_i > 0`,
/// infinite otherwise.
pub fn dirichlet_joint_moment(weights: &[f64], exponents: &[f64]) -> Result<Moment> {
    ensure!(!weights.is_empty(), ParameterDomain, "empty weight vector");
    ensure!(weights.len() == exponents.len(), Usage, "weights and exponents differ in length");
    ensure!(weights.iter().all(|&w| w > 0.0), ParameterDomain, "weights must be positive");
    if weights.iter().zip(exponents).any(|(a, x)| a + x <= 0.0) {
        return Ok(Moment::Infinite);
    }
    let total: f64 = weights.iter().sum();
    let shift: f64 = exponents.iter().sum();
    let mut log = log_gamma(total)? - log_gamma(total + shift)?;
    for (&a, &x) in weights.iter().zip(exponents) {
        if x != 0.0 {
            log += log_gamma(a + x)? - log_gamma(a)?;
        }
    }
    Ok(Moment::Finite(log.exp()))
}
