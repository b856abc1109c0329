//! Quenched walks: a fixed environment, a Markov chain on top of it.

use rand::Rng;
use rustc_hash::FxHashSet;

use crate::error::{ensure, Result};
use crate::graph::Environment;
use crate::walk::lattice::LatticeEnvironment;
use crate::walk::record::{Outcome, WalkRecord};

/// Default step budget for stopping rules that may never fire.
pub const DEFAULT_STEP_GUARD: u64 = 1_000_000_000;

/// Stopping rules for lattice walks.
#[derive(Debug, Clone, PartialEq)]
pub enum StopRule {
    /// Run exactly this many steps.
    Horizon(u64),
    /// Stop on the first visit (time ≥ 0) to one of these sites.
    Hit(Vec<Vec<i64>>),
    /// Stop when the sup-norm distance to the start exceeds `radius`, or,
    /// with `or_return`, on the first return to the start.
    ExitBox { radius: i64, or_return: bool },
}

#[derive(Debug, Clone)]
pub struct WalkOptions {
    /// Times at which the position is recorded (sorted).
    pub checkpoints: Vec<u64>,
    pub keep_path: bool,
    pub step_guard: u64,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self {
            checkpoints: Vec::new(),
            keep_path: false,
            step_guard: DEFAULT_STEP_GUARD,
        }
    }
}

struct Recorder<'a> {
    opts: &'a WalkOptions,
    next_checkpoint: usize,
    checkpoints: Vec<(f64, Vec<i64>)>,
    path: Option<Vec<i64>>,
}

impl<'a> Recorder<'a> {
    fn new(opts: &'a WalkOptions, start: &[i64]) -> Self {
        let mut r = Self {
            opts,
            next_checkpoint: 0,
            checkpoints: Vec::new(),
            path: opts.keep_path.then(Vec::new),
        };
        r.observe(0, start);
        r
    }

    #[inline]
    fn observe(&mut self, n: u64, x: &[i64]) {
        if let Some(p) = self.path.as_mut() {
            p.extend_from_slice(x);
        }
        while self.next_checkpoint < self.opts.checkpoints.len() && self.opts.checkpoints[self.next_checkpoint] <= n {
            if self.opts.checkpoints[self.next_checkpoint] == n {
                self.checkpoints.push((n as f64, x.to_vec()));
            }
            self.next_checkpoint += 1;
        }
    }

    fn finish(self, dim: usize, n: u64, x: Vec<i64>, events: Vec<(String, f64)>, outcome: Outcome) -> WalkRecord {
        WalkRecord {
            dim,
            checkpoints: self.checkpoints,
            events,
            final_time: n as f64,
            final_position: x,
            path: self.path,
            outcome,
        }
    }
}

/// Walk on a lazily sampled lattice environment.
pub fn quenched_walk<R: Rng + ?Sized>(
    env: &mut LatticeEnvironment,
    start: &[i64],
    stop: &StopRule,
    opts: &WalkOptions,
    rng: &mut R,
) -> Result<WalkRecord> {
    let d = env.dim();
    ensure!(start.len() == d, Usage, "start has {} coordinates, lattice has {d}", start.len());
    let mut x = start.to_vec();
    let mut rec = Recorder::new(opts, &x);
    let targets: FxHashSet<Vec<i64>> = match stop {
        StopRule::Hit(t) => {
            ensure!(t.iter().all(|p| p.len() == d), Usage, "target dimension mismatch");
            t.iter().cloned().collect()
        }
        _ => FxHashSet::default(),
    };
    let limit = match stop {
        StopRule::Horizon(n) => *n,
        _ => opts.step_guard,
    };
    if targets.contains(&x) {
        return Ok(rec.finish(d, 0, x, vec![("hit".into(), 0.0)], Outcome::Stopped));
    }
    let mut n = 0u64;
    while n < limit {
        let u: f64 = rng.random();
        env.step_with(&mut x, u);
        n += 1;
        rec.observe(n, &x);
        match stop {
            StopRule::Horizon(_) => {}
            StopRule::Hit(_) => {
                if targets.contains(&x) {
                    return Ok(rec.finish(d, n, x, vec![("hit".into(), n as f64)], Outcome::Stopped));
                }
            }
            StopRule::ExitBox { radius, or_return } => {
                let dist = x.iter().zip(start).map(|(a, b)| (a - b).abs()).max().unwrap_or(0);
                if dist > *radius {
                    return Ok(rec.finish(d, n, x, vec![("exit".into(), n as f64)], Outcome::Stopped));
                }
                if *or_return && x == start {
                    return Ok(rec.finish(d, n, x, vec![("return".into(), n as f64)], Outcome::Stopped));
                }
            }
        }
    }
    let outcome = if matches!(stop, StopRule::Horizon(_)) { Outcome::Horizon } else { Outcome::Timeout };
    Ok(rec.finish(d, n, x, Vec::new(), outcome))
}

/// One-dimensional walk for `steps` steps from 0, returning the positions
/// at the (sorted) `checkpoints`.
pub fn walk_line<R: Rng + ?Sized>(env: &mut LatticeEnvironment, steps: u64, checkpoints: &[u64], rng: &mut R) -> Vec<i64> {
    debug_assert_eq!(env.dim(), 1);
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    let mut x = 0i64;
    while next.peek().is_some_and(|&&c| c == 0) {
        out.push(0);
        next.next();
    }
    for n in 1..=steps {
        let u: f64 = rng.random();
        x += if u < env.right_prob(x) { 1 } else { -1 };
        while next.peek().is_some_and(|&&c| c == n) {
            out.push(x);
            next.next();
        }
    }
    out
}

/// One-dimensional walk from 0 keeping the full path `X_0, …, X_steps`.
pub fn walk_line_path<R: Rng + ?Sized>(env: &mut LatticeEnvironment, steps: u64, rng: &mut R) -> Vec<i64> {
    let mut path = Vec::with_capacity(steps as usize + 1);
    let mut x = 0i64;
    path.push(x);
    for _ in 0..steps {
        let u: f64 = rng.random();
        x += if u < env.right_prob(x) { 1 } else { -1 };
        path.push(x);
    }
    path
}

/// Stopping rules for walks on finite graphs.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphStop {
    Horizon(u64),
    Hit(Vec<usize>),
}

/// Walk on a finite graph; positions are recorded as one-coordinate points
/// holding the vertex index.
pub fn quenched_walk_graph<R: Rng + ?Sized>(
    env: &Environment,
    start: usize,
    stop: &GraphStop,
    opts: &WalkOptions,
    rng: &mut R,
) -> Result<WalkRecord> {
    let g = env.graph();
    ensure!(start < g.vertex_count(), Usage, "start vertex {start} out of range");
    let mut is_target = vec![false; g.vertex_count()];
    if let GraphStop::Hit(t) = stop {
        for &v in t {
            ensure!(v < g.vertex_count(), Usage, "target vertex {v} out of range");
            is_target[v] = true;
        }
    }
    let limit = match stop {
        GraphStop::Horizon(n) => *n,
        GraphStop::Hit(_) => opts.step_guard,
    };
    let mut x = start;
    let mut rec = Recorder::new(opts, &[x as i64]);
    if is_target[x] {
        return Ok(rec.finish(1, 0, vec![x as i64], vec![("hit".into(), 0.0)], Outcome::Stopped));
    }
    let mut n = 0u64;
    while n < limit {
        let u: f64 = rng.random();
        let out = g.out_edges(x);
        let mut acc = 0.0;
        let mut chosen = out[out.len() - 1];
        for &e in out {
            acc += env.prob(e);
            if u < acc {
                chosen = e;
                break;
            }
        }
        x = g.head(chosen);
        n += 1;
        rec.observe(n, &[x as i64]);
        if is_target[x] {
            return Ok(rec.finish(1, n, vec![x as i64], vec![("hit".into(), n as f64)], Outcome::Stopped));
        }
    }
    let outcome = if matches!(stop, GraphStop::Horizon(_)) { Outcome::Horizon } else { Outcome::Timeout };
    Ok(rec.finish(1, n, vec![x as i64], Vec::new(), outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_segment, WeightedDigraph};
    use crate::walk::lattice::LatticeWeights;
    use crate::RngHandle;
    use std::sync::Arc;

    #[test]
    fn forced_environment_moves_right() {
        let g = Arc::new(build_segment(5, 1.0, 1.0).unwrap());
        let mut probs = vec![0.0; g.edge_count()];
        for x in 0..5 {
            probs[g.find_edge(x, x + 1).unwrap()] = 1.0;
        }
        probs[g.find_edge(5, 4).unwrap()] = 1.0;
        let probs: Vec<f64> = probs.iter().map(|&p| if p == 0.0 { f64::MIN_POSITIVE } else { p }).collect();
        let env = Environment::new(Arc::clone(&g), probs).unwrap();
        let opts = WalkOptions { keep_path: true, ..Default::default() };
        let rec = quenched_walk_graph(&env, 0, &GraphStop::Hit(vec![5]), &opts, &mut RngHandle::new(1, 0)).unwrap();
        assert_eq!(rec.path.as_deref(), Some(&[0, 1, 2, 3, 4, 5][..]));
        assert_eq!(rec.event("hit"), Some(5.0));
    }

    #[test]
    fn unreachable_target_times_out() {
        let g = Arc::new(WeightedDigraph::new(3, &[(0, 1, 1.0), (1, 0, 1.0), (2, 2, 1.0)]).unwrap());
        let env = Environment::new(g, vec![1.0; 3]).unwrap();
        let opts = WalkOptions { step_guard: 1000, ..Default::default() };
        let rec = quenched_walk_graph(&env, 0, &GraphStop::Hit(vec![2]), &opts, &mut RngHandle::new(1, 0)).unwrap();
        assert_eq!(rec.outcome, Outcome::Timeout);
        assert_eq!(rec.final_time, 1000.0);
    }

    #[test]
    fn lattice_walk_is_nearest_neighbor_and_reproducible() {
        let w = LatticeWeights::new(&[1.0, 2.0, 0.5, 1.0]).unwrap();
        let opts = WalkOptions { keep_path: true, checkpoints: vec![0, 10, 100], ..Default::default() };
        let run = || {
            let mut env = LatticeEnvironment::new(w.clone(), 4).unwrap();
            quenched_walk(&mut env, &[0, 0], &StopRule::Horizon(1000), &opts, &mut RngHandle::new(4, 1)).unwrap()
        };
        let a = run();
        assert_eq!(a, run());
        assert_eq!(a.path_len(), 1001);
        for n in 0..1000 {
            let (p, q) = (a.path_point(n).unwrap(), a.path_point(n + 1).unwrap());
            assert_eq!(p.iter().zip(q).map(|(x, y)| (x - y).abs()).sum::<i64>(), 1);
        }
        assert_eq!(a.checkpoints.len(), 3);
        assert_eq!(a.checkpoints[2].1, a.path_point(100).unwrap());
        assert_eq!(a.outcome, Outcome::Horizon);
    }

    #[test]
    fn exit_box_and_line_walk_agree_with_generic_engine() {
        let w = LatticeWeights::one_dim(3.0, 1.0).unwrap();
        let mut env = LatticeEnvironment::new(w.clone(), 8).unwrap();
        let rec = quenched_walk(
            &mut env,
            &[0],
            &StopRule::ExitBox { radius: 50, or_return: false },
            &WalkOptions::default(),
            &mut RngHandle::new(8, 0),
        )
        .unwrap();
        assert_eq!(rec.final_position[0].abs(), 51);
        // the 1D fast path consumes the same uniforms as the generic engine
        let mut env1 = LatticeEnvironment::new(w.clone(), 8).unwrap();
        let mut env2 = LatticeEnvironment::new(w, 8).unwrap();
        let fast = walk_line(&mut env1, 500, &[100, 500], &mut RngHandle::new(9, 0));
        let opts = WalkOptions { checkpoints: vec![100, 500], ..Default::default() };
        let slow = quenched_walk(&mut env2, &[0], &StopRule::Horizon(500), &opts, &mut RngHandle::new(9, 0)).unwrap();
        assert_eq!(fast, vec![slow.checkpoints[0].1[0], slow.checkpoints[1].1[0]]);
    }
}
