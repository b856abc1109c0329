use std::fmt::Write as _;

use rand::Rng;

use crate::error::{ensure, Error, Result};

use super::hypergeom::H1;
use super::renewal::{solomon_speed, BetaEnvParams};

/// Seeds of the backward recursion must agree this closely.
pub const PHI_AGREEMENT: f64 = 1e-10;
/// Largest depth tried by [`phi_adaptive`].
pub const MAX_DEPTH: usize = 100_000;
const LOG_LAMBDA_MIN: f64 = -20.0;
const GOLDEN_TOL: f64 = 1e-10;

fn check_lambda(lambda: f64) -> Result<()> {
    ensure!(lambda > 0.0 && lambda <= 1.0, ParameterDomain, "λ must lie in (0, 1], got {lambda}");
    Ok(())
}

fn backward(omega: &[f64], lambda: f64, seed: f64) -> f64 {
    omega.iter().rev().fold(seed, |phi, &w| lambda * w / (1.0 - lambda * (1.0 - w) * phi))
}

/// `φ(ω, λ) = E_{0,ω}[λ^{H_1}]` from `omega[k] = ω_{−k}`, `k = 0..=M`, by the
/// backward recursion `φ_k = λω_k / (1 − λ(1−ω_k)φ_{k−1})`. The recursion
/// is run from the seeds 0 and λ; if they end further apart than
/// [`PHI_AGREEMENT`] the depth is insufficient.
pub fn phi_continued_fraction(omega: &[f64], lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    ensure!(omega.len() >= 2, Usage, "need at least two sites");
    ensure!(omega.iter().all(|&w| w > 0.0 && w < 1.0), ParameterDomain, "ω must lie in (0, 1)");
    let low = backward(omega, lambda, 0.0);
    let high = backward(omega, lambda, lambda);
    if (high - low).abs() > PHI_AGREEMENT {
        return Err(Error::Resource(format!(
            "continued fraction depth {} insufficient: seeds give {low} and {high}",
            omega.len() - 1
        )));
    }
    Ok(0.5 * (low + high))
}

/// `φ(ω, λ)` for a freshly sampled environment, doubling the depth from 16
/// until the two seeds agree.
pub fn phi_adaptive<R: Rng + ?Sized>(params: BetaEnvParams, lambda: f64, rng: &mut R) -> Result<f64> {
    check_lambda(lambda)?;
    let mut omega = Vec::with_capacity(16);
    let mut depth = 16;
    loop {
        while omega.len() < depth {
            omega.push(params.sample_omega(rng)?);
        }
        match phi_continued_fraction(&omega, lambda) {
            Err(Error::Resource(_)) if depth < MAX_DEPTH => depth = (2 * depth).min(MAX_DEPTH),
            other => return other,
        }
    }
}

/// Iterates `Z ← Y/(1+Y−λ²Z)` with `Y = U/(1−U)`, `U ~ Beta(α, β)`, from
/// `Z = 1/2`. Written as `Z ← U/(1 − λ²(1−U)Z)` to avoid forming `Y`.
pub fn sample_z_fixed_point<R: Rng + ?Sized>(
    params: BetaEnvParams,
    lambda: f64,
    iterations: usize,
    rng: &mut R,
) -> Result<f64> {
    check_lambda(lambda)?;
    let l2 = lambda * lambda;
    let mut z = 0.5;
    for _ in 0..iterations {
        let u = params.sample_omega(rng)?;
        z = u / (1.0 - l2 * (1.0 - u) * z);
        if !(z > 0.0 && z <= 1.0) {
            return Err(Error::Numerical(format!("fixed-point iterate left (0, 1]: {z}")));
        }
    }
    Ok(z)
}

/// `E[log φ(ω, λ)] = log λ + E[log Z]` with `Z ~ h¹(α, β; λ²)`; zero at λ = 1.
pub fn log_mgf(params: BetaEnvParams, lambda: f64) -> Result<f64> {
    params.require_transient()?;
    check_lambda(lambda)?;
    if lambda == 1.0 {
        return Ok(0.0);
    }
    let h = H1::new(params.alpha, params.beta, lambda * lambda)?;
    Ok(lambda.ln() + h.mean_log()?)
}

/// `I(t) = sup_{λ∈(0,1]} (t log λ − E[log φ(ω, λ)])` and the maximizing λ.
///
/// The maximization runs over `log λ ∈ [−20, 0]` by golden section. The
/// objective is concave in `log λ`; if the bracket collapses onto an
/// endpoint the endpoint value is compared directly.
pub fn rate_function(params: BetaEnvParams, t: f64) -> Result<(f64, f64)> {
    params.require_transient()?;
    ensure!(t >= 1.0, ParameterDomain, "H_k ≥ k forces t ≥ 1, got {t}");
    let objective = |mu: f64| -> Result<f64> { Ok(t * mu - log_mgf(params, mu.exp())?) };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (LOG_LAMBDA_MIN, 0.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (objective(c)?, objective(d)?);
    while b - a > GOLDEN_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d)?;
        }
    }
    let mut best = (0.5 * (a + b), fc.max(fd));
    for end in [LOG_LAMBDA_MIN, 0.0] {
        let v = objective(end)?;
        if v > best.1 {
            best = (end, v);
        }
    }
    Ok((best.1.max(0.0), best.0.exp()))
}

/// Rate function on a grid of `t` values.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFunctionTable {
    pub params: BetaEnvParams,
    pub t: Vec<f64>,
    pub rate: Vec<f64>,
    pub lambda_star: Vec<f64>,
}

impl RateFunctionTable {
    pub fn compute(params: BetaEnvParams, grid: &[f64]) -> Result<Self> {
        let mut rate = Vec::with_capacity(grid.len());
        let mut lambda_star = Vec::with_capacity(grid.len());
        for &t in grid {
            let (i, l) = rate_function(params, t)?;
            rate.push(i);
            lambda_star.push(l);
        }
        Ok(Self {
            params,
            t: grid.to_vec(),
            rate,
            lambda_star,
        })
    }

    /// Smallest discrete second difference, scaled by the grid spacing.
    pub fn min_second_difference(&self) -> f64 {
        self.rate
            .windows(3)
            .zip(self.t.windows(3))
            .map(|(r, t)| {
                let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
                ((r[2] - r[1]) / h2 - (r[1] - r[0]) / h1) / (0.5 * (h1 + h2))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `I(1/v)`, or `None` when the speed is zero.
    pub fn rate_at_inverse_speed(&self) -> Result<Option<f64>> {
        let v = solomon_speed(self.params);
        if v == 0.0 {
            return Ok(None);
        }
        Ok(Some(rate_function(self.params, 1.0 / v)?.0))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,I,lambda_star\n");
        for ((t, i), l) in self.t.iter().zip(&self.rate).zip(&self.lambda_star) {
            let _ = writeln!(s, "{t},{i},{l}");
        }
        s
    }
}
