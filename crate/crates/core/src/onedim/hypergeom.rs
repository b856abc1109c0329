use crate::error::{ensure, Result};
use crate::quad::integrate;
use crate::sampling::special::{ln_beta, log_gamma};

const ABS_TOL: f64 = 1e-15;
const REL_TOL: f64 = 1e-12;

/// `∫_lo^hi u^{p-1}(1-u)^{q-1} g(u, 1-u) du` for `0 ≤ lo < hi ≤ 1`.
///
/// Substitutes `s = u^p` on the part below 1/2 and `s = (1-u)^q` above, so
/// the Beta-type endpoint factors disappear from the integrand. `g` gets
/// `1-u` separately to keep precision near `u = 1`.
pub(crate) fn beta_weighted<G: Fn(f64, f64) -> f64>(p: f64, q: f64, lo: f64, hi: f64, g: G) -> Result<f64> {
    ensure!(p > 0.0 && q > 0.0, ParameterDomain, "Beta exponents must be positive");
    ensure!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo <= hi, Usage, "bad range [{lo}, {hi}]");
    let mid = 0.5;
    let mut total = 0.0;
    if lo < mid {
        let top = hi.min(mid);
        let f = |s: f64| {
            let u = s.powf(1.0 / p);
            (1.0 - u).powf(q - 1.0) * g(u, 1.0 - u) / p
        };
        total += integrate(f, lo.powf(p), top.powf(p), ABS_TOL, REL_TOL)?;
    }
    if hi > mid {
        let bottom = lo.max(mid);
        let f = |s: f64| {
            let v = s.powf(1.0 / q);
            (1.0 - v).powf(p - 1.0) * g(1.0 - v, v) / q
        };
        total += integrate(f, (1.0 - hi).powf(q), (1.0 - bottom).powf(q), ABS_TOL, REL_TOL)?;
    }
    Ok(total)
}

/// Gauss hypergeometric `₂F₁(a, b; c; z)` from the Euler integral
/// `Γ(c)/(Γ(b)Γ(c-b)) ∫₀¹ u^{b-1}(1-u)^{c-b-1}(1-uz)^{-a} du`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    ensure!(c > b && b > 0.0, ParameterDomain, "Euler integral needs c > b > 0 (b = {b}, c = {c})");
    ensure!(z < 1.0 && a.is_finite(), ParameterDomain, "Euler integral needs z < 1 (z = {z})");
    if z == 0.0 {
        return Ok(1.0);
    }
    let one_minus_z = 1.0 - z;
    // 1 - uz = (1 - z) + z(1 - u)
    let integral = beta_weighted(b, c - b, 0.0, 1.0, |u, v| {
        let w = if z > 0.5 { one_minus_z + z * v } else { 1.0 - u * z };
        w.powf(-a)
    })?;
    Ok(integral * (log_gamma(c)? - log_gamma(b)? - log_gamma(c - b)?).exp())
}

/// The law `h¹(α, β; z)` on `(0, 1)` with density proportional to
/// `u^{α-1}(1-u)^{β-1}(1-uz)^{-α}`, normalized by `B(α,β)·F(α,α;α+β;z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1 {
    alpha: f64,
    beta: f64,
    z: f64,
    log_norm: f64,
}

impl H1 {
    pub fn new(alpha: f64, beta: f64, z: f64) -> Result<Self> {
        ensure!(alpha > 0.0 && beta > 0.0, ParameterDomain, "h¹ needs α, β > 0");
        ensure!(z < 1.0, ParameterDomain, "h¹ needs z < 1 (z = {z})");
        let f = hyp2f1(alpha, alpha, alpha + beta, z)?;
        Ok(Self {
            alpha,
            beta,
            z,
            log_norm: ln_beta(alpha, beta)? + f.ln(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    // (1 - uz)^{-α} with 1 - u passed separately
    fn tilt(&self, u: f64, v: f64) -> f64 {
        let w = if self.z > 0.5 { (1.0 - self.z) + self.z * v } else { 1.0 - u * self.z };
        w.powf(-self.alpha)
    }

    pub fn density(&self, u: f64) -> f64 {
        if !(u > 0.0 && u < 1.0) {
            return 0.0;
        }
        let log_kernel = (self.alpha - 1.0) * u.ln() + (self.beta - 1.0) * (-u).ln_1p();
        (log_kernel - self.log_norm).exp() * self.tilt(u, 1.0 - u)
    }

    pub fn cdf(&self, u: f64) -> Result<f64> {
        if u <= 0.0 {
            return Ok(0.0);
        }
        if u >= 1.0 {
            return Ok(1.0);
        }
        let scale = (-self.log_norm).exp();
        let p = if u <= 0.5 {
            scale * beta_weighted(self.alpha, self.beta, 0.0, u, |a, b| self.tilt(a, b))?
        } else {
            1.0 - scale * beta_weighted(self.alpha, self.beta, u, 1.0, |a, b| self.tilt(a, b))?
        };
        Ok(p.clamp(0.0, 1.0))
    }

    /// `E[g(U)]` for `U ~ h¹`; `g` receives `(u, 1-u)`.
    pub fn expect<G: Fn(f64, f64) -> f64>(&self, g: G) -> Result<f64> {
        let scale = (-self.log_norm).exp();
        Ok(scale * beta_weighted(self.alpha, self.beta, 0.0, 1.0, |u, v| self.tilt(u, v) * g(u, v))?)
    }

    /// `E[log U]`.
    pub fn mean_log(&self) -> Result<f64> {
        self.expect(|u, v| if u < 0.5 { u.ln() } else { (-v).ln_1p() })
    }
}

/// Density of `h¹(α, β; z)` at `u`.
pub fn h1_density(alpha: f64, beta: f64, z: f64, u: f64) -> Result<f64> {
    Ok(H1::new(alpha, beta, z)?.density(u))
}

/// Distribution function of `h¹(α, β; z)` at `u`.
pub fn h1_cdf(alpha: f64, beta: f64, z: f64, u: f64) -> Result<f64> {
    H1::new(alpha, beta, z)?.cdf(u)
}

/// `E[X^s]` for `X = U/(1-U)`, `U ~ h¹(α, β; z)`, by quadrature. Infinite
/// for `s ≥ β`.
pub fn h2_moment(alpha: f64, beta: f64, z: f64, s: f64) -> Result<f64> {
    if s >= beta {
        return Ok(f64::INFINITY);
    }
    ensure!(s > -alpha, ParameterDomain, "moment order must exceed -α");
    let h = H1::new(alpha, beta, z)?;
    // u^{α-1}(1-u)^{β-1}(u/(1-u))^s folds into the Beta exponents
    let scale = (-h.log_norm).exp();
    Ok(scale * beta_weighted(alpha + s, beta - s, 0.0, 1.0, |u, v| h.tilt(u, v))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::special::beta_cdf;

    /// Power series `Σ (a)_n (b)_n / ((c)_n n!) z^n` for `|z| < 1`.
    fn series(a: f64, b: f64, c: f64, z: f64) -> f64 {
        let (mut term, mut sum) = (1.0, 1.0);
        for n in 0..5000 {
            let n = n as f64;
            term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    }

    #[test]
    fn matches_power_series() {
        assert_eq!(hyp2f1(2.0, 3.0, 5.0, 0.0).unwrap(), 1.0);
        let ln2 = 2.0f64.ln();
        assert!((hyp2f1(1.0, 1.0, 2.0, 0.5).unwrap() - 2.0 * ln2).abs() < 1e-12);
        for &(a, b, c, z) in &[
            (3.0, 3.0, 4.0, 0.25),
            (0.5, 1.5, 2.5, -0.7),
            (1.5, 0.3, 2.0, 0.9),
            (2.0, 0.7, 1.2, 0.6),
            (3.0, 3.0, 4.0, -3.0),
        ] {
            let q = hyp2f1(a, b, c, z).unwrap();
            let want = if z.abs() < 1.0 {
                series(a, b, c, z)
            } else {
                // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
                (1.0 - z).powf(-a) * series(a, c - b, c, z / (z - 1.0))
            };
            assert!((q / want - 1.0).abs() < 1e-9, "{a} {b} {c} {z}: {q} vs {want}");
        }
    }

    #[test]
    fn symmetric_in_upper_parameters() {
        for &(a, b, c, z) in &[(3.0, 3.5, 4.0, 0.25), (1.2, 0.4, 2.0, 0.8), (2.0, 1.0, 3.5, -1.5)] {
            let x = hyp2f1(a, b, c, z).unwrap();
            let y = hyp2f1(b, a, c, z).unwrap();
            assert!((x / y - 1.0).abs() < 1e-10);
        }
        assert!(hyp2f1(1.0, 2.0, 2.0, 0.5).is_err());
        assert!(hyp2f1(1.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn h1_reduces_to_beta_and_normalizes() {
        let h = H1::new(3.0, 1.5, 0.0).unwrap();
        for u in [0.1, 0.4, 0.75, 0.99] {
            assert!((h.cdf(u).unwrap() - beta_cdf(3.0, 1.5, u).unwrap()).abs() < 1e-12);
        }
        for &(a, b, z) in &[(3.0, 1.0, 0.25), (2.0, 0.5, 0.81), (1.5, 0.7, -2.0), (3.0, 1.0, 0.999)] {
            let h = H1::new(a, b, z).unwrap();
            let mass = h.expect(|_, _| 1.0).unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "{a} {b} {z}: {mass}");
            let direct = integrate(|u| h.density(u), 0.0, 1.0, 1e-13, 1e-11);
            if b >= 1.0 {
                assert!((direct.unwrap() - 1.0).abs() < 1e-8);
            }
            let mut last = 0.0;
            for k in 1..50 {
                let p = h.cdf(k as f64 / 50.0).unwrap();
                assert!(p >= last);
                last = p;
            }
        }
        assert!(H1::new(3.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn h2_moments_match_closed_form() {
        // E[X^s] = Γ(α+s)Γ(β-s)/(Γ(α)Γ(β)) · F(α, α+s; α+β; z) / F(α, α; α+β; z)
        let (a, b, z) = (3.0, 1.0, 0.25);
        for s in [0.25, 0.5, 0.75] {
            let closed = (log_gamma(a + s).unwrap() + log_gamma(b - s).unwrap()
                - log_gamma(a).unwrap()
                - log_gamma(b).unwrap())
            .exp()
                * hyp2f1(a, a + s, a + b, z).unwrap()
                / hyp2f1(a, a, a + b, z).unwrap();
            let q = h2_moment(a, b, z, s).unwrap();
            assert!((q / closed - 1.0).abs() < 1e-6, "{s}: {q} vs {closed}");
        }
        assert!(h2_moment(a, b, z, 1.0).unwrap().is_infinite());
    }

    #[test]
    fn fixed_point_moment_identity() {
        // X = Y(1+X)/(1+(1-z)X) in law; on the u scale the second factor is (1-uz)^{-1}
        let (a, b, z) = (3.0, 1.0, 0.25);
        let h = H1::new(a, b, z).unwrap();
        for s in [0.25, 0.5, 0.75] {
            let lhs = h2_moment(a, b, z, s).unwrap();
            let y_moment = (log_gamma(a + s).unwrap() + log_gamma(b - s).unwrap()
                - log_gamma(a).unwrap()
                - log_gamma(b).unwrap())
            .exp();
            let ratio = h.expect(|u, _| (1.0 - u * z).powf(-s)).unwrap();
            assert!((lhs / (y_moment * ratio) - 1.0).abs() < 1e-6, "{s}");
        }
    }
}
