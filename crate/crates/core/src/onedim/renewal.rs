use rand::Rng;

use crate::error::{ensure, Error, Result};
use crate::sampling::sample_log_gamma;
use crate::sampling::special::ln_beta;

/// Terms allowed in one renewal series before giving up.
const MAX_TERMS: usize = 100_000_000;

/// Parameters of a Beta(α, β) environment on `Z`: `ω_x` is the
/// probability of a step to the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaEnvParams {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaEnvParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        ensure!(
            alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite(),
            ParameterDomain,
            "Beta parameters must be positive (α = {alpha}, β = {beta})"
        );
        Ok(Self { alpha, beta })
    }

    /// `κ₁ = α − β`.
    pub fn kappa1(&self) -> f64 {
        self.alpha - self.beta
    }

    pub(crate) fn require_transient(&self) -> Result<()> {
        ensure!(
            self.alpha > self.beta,
            ParameterDomain,
            "needs α > β (α = {}, β = {})",
            self.alpha,
            self.beta
        );
        Ok(())
    }

    /// `log ρ = log((1-ω)/ω)` for `ω ~ Beta(α, β)`, as `log G_β − log G_α`.
    pub fn sample_log_rho<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        Ok(sample_log_gamma(self.beta, rng)? - sample_log_gamma(self.alpha, rng)?)
    }

    /// `ω ~ Beta(α, β)`.
    pub fn sample_omega<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let lr = self.sample_log_rho(rng)?;
        // 1/(1+ρ) without overflow
        Ok(if lr > 0.0 { (-lr).exp() / (1.0 + (-lr).exp()) } else { 1.0 / (1.0 + lr.exp()) })
    }
}

/// One draw of `R = 1 + ρ₁ + ρ₁ρ₂ + …`, stopped once the running product
/// falls below `tol` times the partial sum.
pub fn sample_r<R: Rng + ?Sized>(params: BetaEnvParams, rng: &mut R, tol: f64) -> Result<f64> {
    params.require_transient()?;
    ensure!(tol > 0.0, ParameterDomain, "tolerance must be positive");
    let log_tol = tol.ln();
    let mut sum = 1.0f64;
    let mut log_prod = 0.0;
    for _ in 0..MAX_TERMS {
        log_prod += params.sample_log_rho(rng)?;
        let term = log_prod.exp();
        sum += term;
        if !sum.is_finite() {
            return Err(Error::Numerical("renewal series overflowed".into()));
        }
        if log_prod < log_tol + sum.ln() {
            return Ok(sum);
        }
    }
    Err(Error::Resource(format!("renewal series not converged after {MAX_TERMS} terms")))
}

/// `C_K(α, β) = 1/((α−β)·B(α−β, β))`.
pub fn kesten_constant(params: BetaEnvParams) -> Result<f64> {
    params.require_transient()?;
    let k = params.kappa1();
    Ok((-(k.ln() + ln_beta(k, params.beta)?)).exp())
}

/// `v = (α−β−1)/(α+β−1)` when `α > β+1`, otherwise 0.
pub fn solomon_speed(params: BetaEnvParams) -> f64 {
    let BetaEnvParams { alpha, beta } = params;
    if alpha <= beta + 1.0 {
        0.0
    } else {
        (alpha - beta - 1.0) / (alpha + beta - 1.0)
    }
}

/// Right-step probabilities `ω_x` for `x ∈ [−left, right]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvSlab {
    omega: Vec<f64>,
    left: usize,
}

impl EnvSlab {
    pub fn new(omega: Vec<f64>, left: usize) -> Result<Self> {
        ensure!(left < omega.len(), Usage, "slab must contain the origin");
        ensure!(omega.iter().all(|&w| w > 0.0 && w < 1.0), ParameterDomain, "ω must lie in (0, 1)");
        Ok(Self { omega, left })
    }

    pub fn sample<R: Rng + ?Sized>(params: BetaEnvParams, left: usize, right: usize, rng: &mut R) -> Result<Self> {
        let omega = (0..left + right + 1).map(|_| params.sample_omega(rng)).collect::<Result<Vec<_>>>()?;
        Self::new(omega, left)
    }

    pub fn omega(&self, x: i64) -> f64 {
        self.omega[(x + self.left as i64) as usize]
    }

    pub fn left(&self) -> i64 {
        self.left as i64
    }

    pub fn right(&self) -> i64 {
        (self.omega.len() - self.left - 1) as i64
    }

    pub fn rho(&self, x: i64) -> f64 {
        let w = self.omega(x);
        (1.0 - w) / w
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchedIdentities {
    /// `P_{1,ω}(H_0 = ∞) = 1/R`.
    pub escape: f64,
    /// `G_ω(0,0) = R/ω₀`.
    pub green: f64,
    /// `E_{0,ω}[H_1] = 2R₋ − 1`.
    pub mean_hitting: f64,
    /// Both series had last term below `tol` times their sum.
    pub converged: bool,
}

/// `1 + r(from) + r(from)r(from+step) + …` over the slab; returns the sum
/// and the last term.
fn series_along(slab: &EnvSlab, from: i64, to: i64) -> (f64, f64) {
    let step = if to >= from { 1 } else { -1 };
    let (mut sum, mut prod) = (1.0, 1.0);
    let mut x = from;
    loop {
        prod *= slab.rho(x);
        sum += prod;
        if x == to {
            return (sum, prod);
        }
        x += step;
    }
}

/// Evaluates the quenched identities from `R = 1 + ρ₁ + ρ₁ρ₂ + …` (sites to
/// the right of 0) and `R₋ = 1 + ρ₀ + ρ₀ρ₋₁ + …` (sites at and left of 0),
/// both truncated at the slab edge.
pub fn quenched_identities(slab: &EnvSlab, tol: f64) -> Result<QuenchedIdentities> {
    ensure!(slab.right() >= 1, Usage, "slab needs sites to the right of 0");
    let (r, last) = series_along(slab, 1, slab.right());
    let (r_minus, last_minus) = series_along(slab, 0, -slab.left());
    Ok(QuenchedIdentities {
        escape: 1.0 / r,
        green: r / slab.omega(0),
        mean_hitting: 2.0 * r_minus - 1.0,
        converged: last < tol * r && last_minus < tol * r_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{solve, SparseMatrix};
    use crate::sampling::special::beta_cdf;
    use crate::sampling::stats::{hill_tail_exponent, ks_critical, ks_statistic, mean_and_se};
    use crate::RngHandle;

    #[test]
    fn closed_forms() {
        let p = |a, b| BetaEnvParams::new(a, b).unwrap();
        assert!((kesten_constant(p(1.5, 1.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((kesten_constant(p(2.0, 1.0)).unwrap() - 1.0).abs() < 1e-12);
        // B(2,1) = 1/2, B(2,1/2) = 4/3
        assert!((kesten_constant(p(3.0, 1.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((kesten_constant(p(2.5, 0.5)).unwrap() - 0.375).abs() < 1e-12);
        assert!(kesten_constant(p(1.0, 1.0)).is_err());
        assert!((solomon_speed(p(3.0, 1.0)) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(solomon_speed(p(2.0, 1.0)), 0.0);
        assert_eq!(solomon_speed(p(4.0, 1.0)), 0.5);
        assert_eq!(solomon_speed(p(1.0, 3.0)), 0.0);
        assert!(BetaEnvParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn inverse_series_is_beta() {
        let params = BetaEnvParams::new(3.0, 1.0).unwrap();
        let mut rng = RngHandle::new(11, 0);
        let n = 100_000;
        let inv: Vec<f64> = (0..n).map(|_| 1.0 / sample_r(params, &mut rng, 1e-12).unwrap()).collect();
        assert!(inv.iter().all(|&x| x > 0.0 && x <= 1.0));
        let d = ks_statistic(&inv, |x| beta_cdf(2.0, 1.0, x).unwrap()).unwrap();
        assert!(d < ks_critical(n), "{d}");
        let (m, se) = mean_and_se(&inv);
        assert!((m - 2.0 / 3.0).abs() < 3.0 * se);
        // a looser truncation barely moves the statistic
        let mut rng = RngHandle::new(11, 0);
        let loose: Vec<f64> = (0..n).map(|_| 1.0 / sample_r(params, &mut rng, 1e-11).unwrap()).collect();
        let d2 = ks_statistic(&loose, |x| beta_cdf(2.0, 1.0, x).unwrap()).unwrap();
        assert!((d - d2).abs() < 2.0 / (n as f64).sqrt());
    }

    #[test]
    fn series_tail() {
        let params = BetaEnvParams::new(1.5, 1.0).unwrap();
        let mut rng = RngHandle::new(12, 0);
        let n = 200_000;
        let r: Vec<f64> = (0..n).map(|_| sample_r(params, &mut rng, 1e-10).unwrap()).collect();
        let k = hill_tail_exponent(&r, 2000).unwrap();
        assert!((k / 0.5 - 1.0).abs() < 0.15, "{k}");
        let t = 1e3;
        let frac = r.iter().filter(|&&x| x > t).count() as f64 / n as f64;
        let ck = kesten_constant(params).unwrap();
        assert!((frac * t.powf(0.5) / ck - 1.0).abs() < 0.25, "{frac}");
    }

    /// `E_0[H_1]` on `[−L, 1]` with a reflecting left end, from the linear
    /// system `T_x = 1 + ω_x T_{x+1} + (1−ω_x) T_{x−1}`, `T_1 = 0`.
    fn hitting_time_by_solve(slab: &EnvSlab) -> f64 {
        let l = slab.left();
        let n = (l + 1) as usize; // unknowns x = −L..=0
        let idx = |x: i64| (x + l) as usize;
        let mut a = SparseMatrix::new(n);
        let b = vec![1.0; n];
        for x in -l..=0 {
            let w = if x == -l { 1.0 } else { slab.omega(x) };
            a.add(idx(x), idx(x), 1.0);
            if x < 0 {
                a.add(idx(x), idx(x + 1), -w);
            }
            if x > -l {
                a.add(idx(x), idx(x - 1), -(1.0 - w));
            }
        }
        solve(&a, &b).unwrap()[idx(0)]
    }

    #[test]
    fn identities_match_linear_solve() {
        let params = BetaEnvParams::new(3.0, 1.0).unwrap();
        let mut rng = RngHandle::new(13, 0);
        for _ in 0..5 {
            let slab = EnvSlab::sample(params, 1000, 1000, &mut rng).unwrap();
            let q = quenched_identities(&slab, 1e-12).unwrap();
            assert!(q.converged);
            assert!((q.green * slab.omega(0) * q.escape - 1.0).abs() < 1e-12);
            let t = hitting_time_by_solve(&slab);
            assert!((q.mean_hitting / t - 1.0).abs() < 1e-6, "{} vs {t}", q.mean_hitting);
        }
    }

    #[test]
    fn escape_is_beta_and_green_tail() {
        let params = BetaEnvParams::new(3.0, 1.0).unwrap();
        let mut rng = RngHandle::new(14, 0);
        let n = 20_000;
        let mut escape = Vec::with_capacity(n);
        let mut green = Vec::with_capacity(n);
        for _ in 0..n {
            let slab = EnvSlab::sample(params, 0, 200, &mut rng).unwrap();
            let q = quenched_identities(&slab, 1e-12).unwrap();
            escape.push(q.escape);
            green.push(q.green);
        }
        let d = ks_statistic(&escape, |x| beta_cdf(2.0, 1.0, x).unwrap()).unwrap();
        assert!(d < ks_critical(n), "{d}");
        let k = hill_tail_exponent(&green, 400).unwrap();
        assert!((k / 2.0 - 1.0).abs() < 0.2, "{k}");
    }
}
