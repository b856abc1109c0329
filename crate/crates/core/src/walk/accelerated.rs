//! The accelerated continuous-time walk: at `x` it waits an exponential time
//! of rate `γ^ω(x)` and then jumps according to `ω(x, ·)`.

use rand::Rng;
use rustc_hash::FxHashMap;

use crate::error::{ensure, Error, Result};
use crate::walk::lattice::{LatticeEnvironment, SiteVector};
use crate::walk::record::{Outcome, WalkRecord};

/// Maximum number of exit paths enumerated for one `γ` evaluation.
pub const PATH_GUARD: usize = 1_000_000;

/// `γ^ω(x) = 1 / Σ_σ ω_σ`, the sum running over simple nearest-neighbor paths
/// from `x` that stay in the box `x + [−r, r]^d` until their last step, which
/// leaves it.
pub fn gamma_factor(env: &mut LatticeEnvironment, x: &[i64], r: u32) -> Result<f64> {
    let d = env.dim();
    ensure!(x.len() == d, Usage, "site has {} coordinates, lattice has {d}", x.len());
    if r == 0 {
        // the exit paths are the single steps, whose probabilities sum to one
        env.probs(x);
        return Ok(1.0);
    }
    let side = 2 * r as usize + 1;
    let cells = side.pow(d as u32);
    // transition vectors of the whole box, indexed by local coordinates
    let mut local = vec![[0.0; 8] as SiteVector; cells];
    let mut site = vec![0i64; d];
    for (cell, slot) in local.iter_mut().enumerate() {
        let mut c = cell;
        for i in 0..d {
            site[i] = x[i] + (c % side) as i64 - r as i64;
            c /= side;
        }
        *slot = env.probs(&site);
    }
    let strides: Vec<usize> = (0..d).map(|i| side.pow(i as u32)).collect();
    let center = (0..d).map(|i| r as usize * strides[i]).sum::<usize>();
    let mut coords = vec![r as usize; d];
    let mut visited = vec![false; cells];
    visited[center] = true;
    let mut search = ExitSearch {
        d,
        side,
        strides: &strides,
        local: &local,
        visited,
        paths: 0,
        total: 0.0,
    };
    search.dfs(center, &mut coords, 1.0)?;
    Ok(1.0 / search.total)
}

struct ExitSearch<'a> {
    d: usize,
    side: usize,
    strides: &'a [usize],
    local: &'a [SiteVector],
    visited: Vec<bool>,
    paths: usize,
    total: f64,
}

impl ExitSearch<'_> {
    fn dfs(&mut self, cell: usize, coords: &mut [usize], weight: f64) -> Result<()> {
        let probs = self.local[cell];
        for dir in 0..2 * self.d {
            let w = weight * probs[dir];
            let (axis, up) = if dir < self.d { (dir, true) } else { (dir - self.d, false) };
            let leaves = if up { coords[axis] + 1 == self.side } else { coords[axis] == 0 };
            if leaves {
                self.paths += 1;
                if self.paths > PATH_GUARD {
                    return Err(Error::Resource(format!(
                        "more than {PATH_GUARD} exit paths; use a smaller box"
                    )));
                }
                self.total += w;
                continue;
            }
            let next = if up { cell + self.strides[axis] } else { cell - self.strides[axis] };
            if self.visited[next] {
                continue;
            }
            self.visited[next] = true;
            if up {
                coords[axis] += 1;
            } else {
                coords[axis] -= 1;
            }
            let res = self.dfs(next, coords, w);
            if up {
                coords[axis] -= 1;
            } else {
                coords[axis] += 1;
            }
            self.visited[next] = false;
            res?;
        }
        Ok(())
    }
}

/// Step-by-step driver of the accelerated walk; `γ` values are cached per site.
pub struct AcceleratedWalker<'a> {
    env: &'a mut LatticeEnvironment,
    r: u32,
    gammas: FxHashMap<Vec<i64>, f64>,
    position: Vec<i64>,
    time: f64,
    jumps: u64,
}

impl<'a> AcceleratedWalker<'a> {
    pub fn new(env: &'a mut LatticeEnvironment, r: u32, start: &[i64]) -> Result<Self> {
        ensure!(start.len() == env.dim(), Usage, "start has {} coordinates, lattice has {}", start.len(), env.dim());
        Ok(Self {
            env,
            r,
            gammas: FxHashMap::default(),
            position: start.to_vec(),
            time: 0.0,
            jumps: 0,
        })
    }

    pub fn position(&self) -> &[i64] {
        &self.position
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn jumps(&self) -> u64 {
        self.jumps
    }

    /// `γ^ω` at the current position.
    pub fn gamma_here(&mut self) -> Result<f64> {
        if let Some(&g) = self.gammas.get(&self.position) {
            return Ok(g);
        }
        let g = gamma_factor(self.env, &self.position, self.r)?;
        self.gammas.insert(self.position.clone(), g);
        Ok(g)
    }

    /// Draw the holding time at the current site (exact exponential of rate
    /// `γ^ω(x)`) without moving.
    pub fn holding_time<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<f64> {
        let gamma = self.gamma_here()?;
        let u: f64 = rng.random();
        Ok(-(-u).ln_1p() / gamma)
    }

    /// Move the clock by `hold` and jump according to `ω(x, ·)`.
    pub fn jump_after<R: Rng + ?Sized>(&mut self, hold: f64, rng: &mut R) {
        self.time += hold;
        self.env.step_with(&mut self.position, rng.random());
        self.jumps += 1;
    }
}

/// Accelerated walk up to time `horizon`, recording the position at each of
/// the (sorted) `checkpoints`. Events: `"first_jump"` (time of the first jump,
/// if any) and `"jumps"` (number of jumps).
pub fn accelerated_walk<R: Rng + ?Sized>(
    env: &mut LatticeEnvironment,
    r: u32,
    start: &[i64],
    horizon: f64,
    checkpoints: &[f64],
    rng: &mut R,
) -> Result<WalkRecord> {
    ensure!(horizon >= 0.0, ParameterDomain, "horizon must be nonnegative");
    let d = env.dim();
    let mut walker = AcceleratedWalker::new(env, r, start)?;
    let mut next_cp = 0;
    let mut recorded = Vec::new();
    let mut events = Vec::new();
    loop {
        let t_next = walker.time() + walker.holding_time(rng)?;
        while next_cp < checkpoints.len() && checkpoints[next_cp] < t_next && checkpoints[next_cp] <= horizon {
            recorded.push((checkpoints[next_cp], walker.position().to_vec()));
            next_cp += 1;
        }
        if t_next > horizon {
            break;
        }
        if walker.jumps() == 0 {
            events.push(("first_jump".to_string(), t_next));
        }
        let hold = t_next - walker.time();
        walker.jump_after(hold, rng);
    }
    events.push(("jumps".to_string(), walker.jumps() as f64));
    Ok(WalkRecord {
        dim: d,
        checkpoints: recorded,
        events,
        final_time: horizon,
        final_position: walker.position().to_vec(),
        path: None,
        outcome: Outcome::Horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::stats::mean_and_se;
    use crate::walk::lattice::LatticeWeights;
    use crate::RngHandle;

    #[test]
    fn radius_zero_gives_one() {
        let w = LatticeWeights::new(&[0.4, 0.1, 0.1, 0.1]).unwrap();
        let mut env = LatticeEnvironment::new(w, 3).unwrap();
        for i in 0..20 {
            assert!((gamma_factor(&mut env, &[i, -i], 0).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn one_dim_radius_one_by_hand() {
        let w = LatticeWeights::one_dim(2.0, 1.5).unwrap();
        let mut env = LatticeEnvironment::new(w, 5).unwrap();
        for x in -5..5 {
            // the only exit paths are x→x+1→x+2 and x→x−1→x−2
            let p0 = env.right_prob(x);
            let p1 = env.right_prob(x + 1);
            let pm = env.right_prob(x - 1);
            let expected = 1.0 / (p0 * p1 + (1.0 - p0) * (1.0 - pm));
            assert!((gamma_factor(&mut env, &[x], 1).unwrap() - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn gamma_is_at_least_one() {
        let w = LatticeWeights::new(&[1.0, 0.5, 0.7, 0.3]).unwrap();
        let mut env = LatticeEnvironment::new(w, 6).unwrap();
        for i in 0..10 {
            assert!(gamma_factor(&mut env, &[i, 2 * i], 1).unwrap() >= 1.0);
        }
    }

    #[test]
    fn guard_trips_on_large_boxes() {
        let w = LatticeWeights::new(&[1.0; 6]).unwrap();
        let mut env = LatticeEnvironment::new(w, 6).unwrap();
        assert!(matches!(gamma_factor(&mut env, &[0, 0, 0], 2), Err(Error::Resource(_))));
    }

    #[test]
    fn walk_records_checkpoints() {
        let w = LatticeWeights::new(&[2.0, 1.0, 1.0, 1.0]).unwrap();
        let mut env = LatticeEnvironment::new(w, 8).unwrap();
        let rec = accelerated_walk(&mut env, 1, &[0, 0], 50.0, &[0.0, 10.0, 50.0], &mut RngHandle::new(8, 0)).unwrap();
        assert_eq!(rec.checkpoints.len(), 3);
        assert_eq!(rec.checkpoints[0].1, vec![0, 0]);
        assert_eq!(rec.checkpoints[2].1, rec.final_position);
        assert!(rec.event("jumps").unwrap() > 0.0);
    }

    #[test]
    fn holding_time_mean() {
        let w = LatticeWeights::new(&[1.0, 0.5, 0.7, 0.3]).unwrap();
        let mut env = LatticeEnvironment::new(w, 7).unwrap();
        let gamma = gamma_factor(&mut env, &[0, 0], 1).unwrap();
        let mut rng = RngHandle::new(7, 0);
        let mut walker = AcceleratedWalker::new(&mut env, 1, &[0, 0]).unwrap();
        let holds: Vec<f64> = (0..20_000).map(|_| walker.holding_time(&mut rng).unwrap()).collect();
        let (m, se) = mean_and_se(&holds);
        assert!((m - 1.0 / gamma).abs() < 3.0 * se, "{m} vs {}", 1.0 / gamma);
    }
}
