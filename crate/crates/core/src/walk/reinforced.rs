//! Directed-edge linearly reinforced walks and their exact path laws.

use rand::Rng;
use rustc_hash::FxHashMap;

use crate::error::{ensure, Result};
use crate::graph::WeightedDigraph;
use crate::sampling::{dirichlet_joint_moment, Moment};
use crate::walk::lattice::LatticeWeights;
use crate::walk::record::{Outcome, WalkRecord};

/// Reinforced walk on a finite graph: from `x`, edge `e` is taken with
/// probability `N_e / Σ_{tail(f)=x} N_f` where `N_e = α_e + (traversals of e)`.
pub fn reinforced_walk_graph<R: Rng + ?Sized>(
    graph: &WeightedDigraph,
    start: usize,
    horizon: u64,
    rng: &mut R,
) -> Result<WalkRecord> {
    ensure!(start < graph.vertex_count(), Usage, "start vertex {start} out of range");
    let mut counts = graph.weights().to_vec();
    let mut x = start;
    let mut path = vec![x as i64];
    for _ in 0..horizon {
        let out = graph.out_edges(x);
        let total: f64 = out.iter().map(|&e| counts[e]).sum();
        let u = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = out[out.len() - 1];
        for &e in out {
            acc += counts[e];
            if u < acc {
                chosen = e;
                break;
            }
        }
        counts[chosen] += 1.0;
        x = graph.head(chosen);
        path.push(x as i64);
    }
    Ok(WalkRecord {
        dim: 1,
        checkpoints: Vec::new(),
        events: Vec::new(),
        final_time: horizon as f64,
        final_position: vec![x as i64],
        path: Some(path),
        outcome: Outcome::Horizon,
    })
}

/// Reinforced walk on `Z^d` with initial weights `α_i` on every edge in
/// direction `i`.
pub fn reinforced_walk_lattice<R: Rng + ?Sized>(
    w: &LatticeWeights,
    start: &[i64],
    horizon: u64,
    rng: &mut R,
) -> Result<WalkRecord> {
    let d = w.dim();
    ensure!(start.len() == d, Usage, "start has {} coordinates, lattice has {d}", start.len());
    let alpha = w.alpha();
    let total0: f64 = w.total();
    let mut extra: FxHashMap<(Vec<i64>, usize), f64> = FxHashMap::default();
    let mut visits: FxHashMap<Vec<i64>, f64> = FxHashMap::default();
    let mut x = start.to_vec();
    let mut path = x.clone();
    for _ in 0..horizon {
        let total = total0 + visits.get(&x).copied().unwrap_or(0.0);
        let u = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut dir = 2 * d - 1;
        for (j, &a) in alpha.iter().enumerate() {
            acc += a + extra.get(&(x.clone(), j)).copied().unwrap_or(0.0);
            if u < acc {
                dir = j;
                break;
            }
        }
        *extra.entry((x.clone(), dir)).or_insert(0.0) += 1.0;
        *visits.entry(x.clone()).or_insert(0.0) += 1.0;
        let (axis, delta) = w.step(dir);
        x[axis] += delta;
        path.extend_from_slice(&x);
    }
    Ok(WalkRecord {
        dim: d,
        checkpoints: Vec::new(),
        events: Vec::new(),
        final_time: horizon as f64,
        final_position: x,
        path: Some(path),
        outcome: Outcome::Horizon,
    })
}

fn check_path(graph: &WeightedDigraph, start: usize, edges: &[usize]) -> Result<()> {
    ensure!(start < graph.vertex_count(), Usage, "start vertex {start} out of range");
    let mut x = start;
    for &e in edges {
        ensure!(e < graph.edge_count(), Usage, "edge {e} out of range");
        ensure!(graph.tail(e) == x, Structural, "edge {e} does not leave vertex {x}");
        x = graph.head(e);
    }
    Ok(())
}

/// Probability that the reinforced walk from `start` follows `edges`,
/// multiplying the successive urn draw probabilities.
pub fn reinforced_path_probability(graph: &WeightedDigraph, start: usize, edges: &[usize]) -> Result<f64> {
    check_path(graph, start, edges)?;
    let mut counts = graph.weights().to_vec();
    let mut p = 1.0;
    for &e in edges {
        let x = graph.tail(e);
        let total: f64 = graph.out_edges(x).iter().map(|&f| counts[f]).sum();
        p *= counts[e] / total;
        counts[e] += 1.0;
    }
    Ok(p)
}

/// Annealed probability that the walk in a Dirichlet environment follows
/// `edges`: the product over vertices of `E[∏_e ω_e^{n_e}]`.
pub fn annealed_path_probability(graph: &WeightedDigraph, start: usize, edges: &[usize]) -> Result<f64> {
    check_path(graph, start, edges)?;
    let mut uses = vec![0.0; graph.edge_count()];
    for &e in edges {
        uses[e] += 1.0;
    }
    let mut p = 1.0;
    for x in 0..graph.vertex_count() {
        let out = graph.out_edges(x);
        if out.iter().all(|&e| uses[e] == 0.0) {
            continue;
        }
        let w: Vec<f64> = out.iter().map(|&e| graph.weight(e)).collect();
        let n: Vec<f64> = out.iter().map(|&e| uses[e]).collect();
        match dirichlet_joint_moment(&w, &n)? {
            Moment::Finite(m) => p *= m,
            Moment::Infinite => unreachable!("nonnegative exponents give finite moments"),
        }
    }
    Ok(p)
}

/// All edge paths of exactly `len` steps from `start`.
pub fn enumerate_paths(graph: &WeightedDigraph, start: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(start, Vec::new())];
    while let Some((x, path)) = stack.pop() {
        if path.len() == len {
            out.push(path);
            continue;
        }
        for &e in graph.out_edges(x) {
            let mut next = path.clone();
            next.push(e);
            stack.push((graph.head(e), next));
        }
    }
    out
}
