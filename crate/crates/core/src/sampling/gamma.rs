use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{ensure, Error, Result};

/// A point of the open simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coordinates: Vec<f64>,
}

impl SimplexPoint {
    /// Validates positivity and normalization (to 1e-12).
    pub fn new(coordinates: Vec<f64>) -> Result<Self> {
        ensure!(!coordinates.is_empty(), ParameterDomain, "empty simplex point");
        ensure!(
            coordinates.iter().all(|&c| c > 0.0 && c <= 1.0),
            ParameterDomain,
            "simplex coordinates must lie in (0, 1]"
        );
        let total: f64 = coordinates.iter().sum();
        ensure!((total - 1.0).abs() <= 1e-12, ParameterDomain, "coordinates sum to {total}");
        Ok(Self { coordinates })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coordinates
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coordinates
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }
}

fn gamma_dist(shape: f64) -> Result<Gamma<f64>> {
    ensure!(shape > 0.0 && shape.is_finite(), ParameterDomain, "gamma shape must be positive, got {shape}");
    Gamma::new(shape, 1.0).map_err(|e| Error::ParameterDomain(e.to_string()))
}

pub fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    Ok(gamma_dist(shape)?.sample(rng))
}

/// `log G` for `G ~ Gamma(shape, 1)`. For shape < 1 this uses
/// `G = G' · U^{1/shape}` with `G' ~ Gamma(shape + 1)`, so tiny values never
/// underflow.
pub fn sample_log_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    LogGamma::new(shape)?.sample(rng)
}

pub fn sample_beta<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    let p = sample_dirichlet(&[a, b], rng)?;
    Ok(p.as_slice()[0])
}

pub fn sample_dirichlet<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<SimplexPoint> {
    let d = Dirichlet::new(weights)?;
    let mut out = vec![0.0; weights.len()];
    d.sample_into(rng, &mut out);
    Ok(SimplexPoint { coordinates: out })
}

#[derive(Debug, Clone)]
struct LogGamma {
    boosted: bool,
    inv_shape: f64,
    dist: Gamma<f64>,
}

impl LogGamma {
    fn new(shape: f64) -> Result<Self> {
        let boosted = shape < 1.0;
        let dist = gamma_dist(if boosted { shape + 1.0 } else { shape })?;
        Ok(Self {
            boosted,
            inv_shape: 1.0 / shape,
            dist,
        })
    }

    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        Ok(self.sample_raw(rng))
    }

    #[inline]
    fn sample_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g = self.dist.sample(rng).ln();
        if self.boosted {
            let u: f64 = loop {
                let u: f64 = rng.random();
                if u > 0.0 {
                    break u;
                }
            };
            g + u.ln() * self.inv_shape
        } else {
            g
        }
    }
}

/// Dirichlet sampler with the per-coordinate Gamma laws prepared once.
///
/// When any weight is below 1 the coordinates are drawn in log space and
/// normalized with a log-sum-exp, so very small transition probabilities
/// keep their relative precision. Coordinates are floored at
/// `f64::MIN_POSITIVE`.
#[derive(Debug, Clone)]
pub struct Dirichlet {
    log_space: bool,
    direct: Vec<Gamma<f64>>,
    logs: Vec<LogGamma>,
}

impl Dirichlet {
    pub fn new(weights: &[f64]) -> Result<Self> {
        ensure!(!weights.is_empty(), ParameterDomain, "Dirichlet needs at least one weight");
        let log_space = weights.iter().any(|&w| w < 1.0);
        let mut direct = Vec::new();
        let mut logs = Vec::new();
        for &w in weights {
            if log_space {
                logs.push(LogGamma::new(w)?);
            } else {
                direct.push(gamma_dist(w)?);
            }
        }
        Ok(Self { log_space, direct, logs })
    }

    pub fn dim(&self) -> usize {
        if self.log_space {
            self.logs.len()
        } else {
            self.direct.len()
        }
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let n = self.dim();
        if n == 1 {
            out[0] = 1.0;
            return;
        }
        if self.log_space {
            let mut max = f64::NEG_INFINITY;
            for (slot, lg) in out.iter_mut().zip(&self.logs) {
                *slot = lg.sample_raw(rng);
                max = max.max(*slot);
            }
            for slot in out.iter_mut().take(n) {
                *slot = (*slot - max).exp();
            }
        } else {
            for (slot, g) in out.iter_mut().zip(&self.direct) {
                *slot = g.sample(rng);
            }
        }
        let total: f64 = out[..n].iter().sum();
        for slot in out[..n].iter_mut() {
            *slot = (*slot / total).max(f64::MIN_POSITIVE);
        }
    }
}
