//! Translation-invariant Dirichlet weights on `Z^d` and the lazily sampled
//! environment they define.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rustc_hash::FxHashMap;

use crate::error::{ensure, Result};
use crate::rng::site_seed;
use crate::sampling::Dirichlet;

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 4;

/// Transition vector of one site, in direction order `e_1..e_d, −e_1..−e_d`.
pub type SiteVector = [f64; 2 * MAX_DIM];

/// Weights `α_1, …, α_{2d}` attached to the directions `e_1, …, e_d, −e_1, …, −e_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeWeights {
    alpha: Vec<f64>,
}

impl LatticeWeights {
    pub fn new(alpha: &[f64]) -> Result<Self> {
        ensure!(
            !alpha.is_empty() && alpha.len().is_multiple_of(2),
            Usage,
            "lattice weights come in pairs, got {}",
            alpha.len()
        );
        ensure!(alpha.len() <= 2 * MAX_DIM, Usage, "dimension above {MAX_DIM} is not supported");
        ensure!(alpha.iter().all(|&a| a > 0.0 && a.is_finite()), ParameterDomain, "weights must be positive");
        Ok(Self { alpha: alpha.to_vec() })
    }

    /// `(α, β)` on `Z`: `α` to the right, `β` to the left.
    pub fn one_dim(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(&[alpha, beta])
    }

    pub fn dim(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn total(&self) -> f64 {
        self.alpha.iter().sum()
    }

    /// Position change of a step in `direction`.
    pub fn step(&self, direction: usize) -> (usize, i64) {
        let d = self.dim();
        if direction < d {
            (direction, 1)
        } else {
            (direction - d, -1)
        }
    }
}

/// `d_α = Σ α_i e_i`, i.e. `α_i − α_{i+d}` in coordinate `i`.
pub fn d_alpha(w: &LatticeWeights) -> Vec<f64> {
    let d = w.dim();
    (0..d).map(|i| w.alpha[i] - w.alpha[i + d]).collect()
}

/// `κ = 2Σα_i − max_i (α_i + α_{i+d})`: the total weight leaving the
/// strongest pair trap.
pub fn kappa(w: &LatticeWeights) -> f64 {
    let d = w.dim();
    let pair_max = (0..d).map(|i| w.alpha[i] + w.alpha[i + d]).fold(f64::NEG_INFINITY, f64::max);
    2.0 * w.total() - pair_max
}

/// `min_{i0} ( α_{i0} + α_{i0+d} + (r+1) Σ_{i≠i0} (α_i + α_{i+d}) )` for the
/// box of radius `r`. In dimension one the complementary sum is empty and the
/// result is `α_1 + α_2`.
pub fn kappa_lambda_box(w: &LatticeWeights, r: u32) -> f64 {
    let d = w.dim();
    let pair: Vec<f64> = (0..d).map(|i| w.alpha[i] + w.alpha[i + d]).collect();
    let total: f64 = pair.iter().sum();
    pair.iter()
        .map(|&p| p + (r as f64 + 1.0) * (total - p))
        .fold(f64::INFINITY, f64::min)
}

/// One sample of the Green function `G^{{0,e}}(0,0) = 1/(1 − ω(0,e)ω(e,0))`
/// of the pair trap `{0, e_axis}`. `1 − ab` is formed as `(1−a) + a(1−b)`
/// from the complementary coordinates to keep precision in the tail.
pub fn pair_trap_green<R: Rng + ?Sized>(sampler: &Dirichlet, w: &LatticeWeights, axis: usize, rng: &mut R) -> f64 {
    let d = w.dim();
    let n = 2 * d;
    let mut at0 = [0.0; 2 * MAX_DIM];
    let mut at1 = [0.0; 2 * MAX_DIM];
    sampler.sample_into(rng, &mut at0[..n]);
    sampler.sample_into(rng, &mut at1[..n]);
    let a = at0[axis];
    let rest0: f64 = (0..n).filter(|&j| j != axis).map(|j| at0[j]).sum();
    let rest1: f64 = (0..n).filter(|&j| j != axis + d).map(|j| at1[j]).sum();
    1.0 / (rest0 + a * rest1)
}

/// I.i.d. Dirichlet(α) transition vectors on `Z^d`, sampled on first use.
///
/// The vector at site `x` is drawn from a generator seeded with
/// `site_seed(seed, x)`, so it does not depend on the order in which sites
/// are visited, and two environments with the same seed agree everywhere.
#[derive(Debug, Clone)]
pub struct LatticeEnvironment {
    weights: LatticeWeights,
    seed: u64,
    sampler: Dirichlet,
    // d = 1: probability of a right step, NaN when not sampled yet
    line_pos: Vec<f64>,
    line_neg: Vec<f64>,
    sites: FxHashMap<[i32; MAX_DIM], SiteVector>,
}

impl LatticeEnvironment {
    pub fn new(weights: LatticeWeights, seed: u64) -> Result<Self> {
        let sampler = Dirichlet::new(weights.alpha())?;
        Ok(Self {
            weights,
            seed,
            sampler,
            line_pos: Vec::new(),
            line_neg: Vec::new(),
            sites: FxHashMap::default(),
        })
    }

    pub fn weights(&self) -> &LatticeWeights {
        &self.weights
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    /// Number of sites sampled so far.
    pub fn cached_sites(&self) -> usize {
        if self.dim() == 1 {
            self.line_pos.iter().chain(&self.line_neg).filter(|p| !p.is_nan()).count()
        } else {
            self.sites.len()
        }
    }

    fn key(x: &[i64]) -> [i32; MAX_DIM] {
        let mut k = [0i32; MAX_DIM];
        for (slot, &c) in k.iter_mut().zip(x) {
            *slot = i32::try_from(c).expect("lattice coordinate exceeds i32 range");
        }
        k
    }

    /// The transition vector at `x`, computed from the seed without caching.
    pub fn site_vector(&self, x: &[i64]) -> SiteVector {
        let key = Self::key(x);
        let mut rng = SmallRng::seed_from_u64(site_seed(self.seed, &key[..self.dim()]));
        let mut v = [0.0; 2 * MAX_DIM];
        self.sampler.sample_into(&mut rng, &mut v[..2 * self.dim()]);
        v
    }

    /// The transition vector at `x`, sampled on first use and cached.
    pub fn probs(&mut self, x: &[i64]) -> SiteVector {
        if self.dim() == 1 {
            let p = self.right_prob(x[0]);
            let mut v = [0.0; 2 * MAX_DIM];
            v[0] = p;
            v[1] = 1.0 - p;
            return v;
        }
        let key = Self::key(x);
        if let Some(v) = self.sites.get(&key) {
            return *v;
        }
        let v = self.site_vector(x);
        self.sites.insert(key, v);
        v
    }

    /// `ω(x, x+1)` in dimension one.
    #[inline]
    pub fn right_prob(&mut self, x: i64) -> f64 {
        let (store, i) = if x >= 0 {
            (&mut self.line_pos, x as usize)
        } else {
            (&mut self.line_neg, (-x - 1) as usize)
        };
        if i >= store.len() {
            store.resize((i + 1).max(2 * store.len()).max(1024), f64::NAN);
        }
        let p = store[i];
        if !p.is_nan() {
            return p;
        }
        let key = [x as i32, 0, 0, 0];
        let mut rng = SmallRng::seed_from_u64(site_seed(self.seed, &key[..1]));
        let mut v = [0.0; 2];
        self.sampler.sample_into(&mut rng, &mut v);
        // re-borrow: the sampler call above needed `self`
        let store = if x >= 0 { &mut self.line_pos } else { &mut self.line_neg };
        store[i] = v[0];
        v[0]
    }

    /// Draw the next position from `x` using a uniform `u ∈ [0,1)`.
    #[inline]
    pub fn step_with(&mut self, x: &mut [i64], u: f64) -> usize {
        let v = self.probs(x);
        let n = 2 * self.dim();
        let mut acc = 0.0;
        let mut dir = n - 1;
        for (j, &p) in v[..n].iter().enumerate() {
            acc += p;
            if u < acc {
                dir = j;
                break;
            }
        }
        let (axis, delta) = self.weights.step(dir);
        x[axis] += delta;
        dir
    }
}
