//! Exact hitting and occupation quantities by linear solves.

use crate::error::{ensure, Error, Result};
use crate::graph::env::Environment;
use crate::linalg::{self, SparseMatrix};

/// `P_start(H_A < H_B)` for disjoint vertex sets `A`, `B`.
pub fn absorption_probability(env: &Environment, start: usize, target_a: &[usize], target_b: &[usize]) -> Result<f64> {
    let g = env.graph();
    let n = g.vertex_count();
    ensure!(start < n, Usage, "start vertex {start} out of range");
    let mut label = vec![0u8; n]; // 1 = A, 2 = B
    for &a in target_a {
        ensure!(a < n, Usage, "vertex {a} out of range");
        label[a] = 1;
    }
    for &b in target_b {
        ensure!(b < n, Usage, "vertex {b} out of range");
        ensure!(label[b] != 1, Usage, "target sets overlap at vertex {b}");
        label[b] = 2;
    }
    match label[start] {
        1 => return Ok(1.0),
        2 => return Ok(0.0),
        _ => {}
    }
    // unknowns: vertices reachable from start without passing through A ∪ B
    let mut index = vec![usize::MAX; n];
    let mut order = vec![start];
    index[start] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &e in g.out_edges(v) {
            let w = g.head(e);
            if label[w] == 0 && index[w] == usize::MAX {
                index[w] = order.len();
                order.push(w);
            }
        }
    }
    let m = order.len();
    // every unknown must be able to reach a target
    let mut reaches = vec![false; m];
    let mut frontier: Vec<usize> = (0..m)
        .filter(|&k| g.out_edges(order[k]).iter().any(|&e| label[g.head(e)] != 0))
        .collect();
    for &k in &frontier {
        reaches[k] = true;
    }
    while let Some(k) = frontier.pop() {
        for &e in g.in_edges(order[k]) {
            let j = index[g.tail(e)];
            if j != usize::MAX && !reaches[j] {
                reaches[j] = true;
                frontier.push(j);
            }
        }
    }
    if let Some(k) = reaches.iter().position(|&r| !r) {
        return Err(Error::Structural(format!("vertex {} cannot reach either target set", order[k])));
    }
    let mut a = SparseMatrix::new(m);
    let mut b = vec![0.0; m];
    for (k, &v) in order.iter().enumerate() {
        a.add(k, k, 1.0);
        for &e in g.out_edges(v) {
            let w = g.head(e);
            match label[w] {
                1 => b[k] += env.prob(e),
                2 => {}
                _ => a.add(k, index[w], -env.prob(e)),
            }
        }
    }
    let h = linalg::solve(&a, &b)?;
    check_residual(&a, &h, &b)?;
    Ok(h[0].clamp(0.0, 1.0))
}

/// Probability that the walk started at `x` first comes back to `x` through
/// the edge `entry` (which must end at `x`).
///
/// `x` is split into a source keeping its outgoing edges and an absorbing sink
/// receiving its incoming edges; the answer is the absorption mass carried by
/// `entry`.
pub fn return_via_edge_probability(env: &Environment, x: usize, entry: usize) -> Result<f64> {
    let g = env.graph();
    let n = g.vertex_count();
    ensure!(x < n, Usage, "vertex {x} out of range");
    ensure!(entry < g.edge_count(), Usage, "edge {entry} out of range");
    ensure!(g.head(entry) == x, Structural, "edge {entry} does not enter vertex {x}");
    ensure!(g.is_strongly_connected(), Structural, "return probabilities need a strongly connected graph");
    // h(v) = P_v(reach x, and do so through `entry`), v ≠ x
    let idx = |v: usize| if v < x { v } else { v - 1 };
    let m = n - 1;
    let mut a = SparseMatrix::new(m);
    let mut b = vec![0.0; m];
    for v in (0..n).filter(|&v| v != x) {
        let k = idx(v);
        a.add(k, k, 1.0);
        for &e in g.out_edges(v) {
            let w = g.head(e);
            if w == x {
                if e == entry {
                    b[k] += env.prob(e);
                }
            } else {
                a.add(k, idx(w), -env.prob(e));
            }
        }
    }
    let h = if m > 0 {
        let h = linalg::solve(&a, &b)?;
        check_residual(&a, &h, &b)?;
        h
    } else {
        Vec::new()
    };
    let mut p = 0.0;
    for &e in g.out_edges(x) {
        let w = g.head(e);
        if w == x {
            if e == entry {
                p += env.prob(e);
            }
        } else {
            p += env.prob(e) * h[idx(w)];
        }
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Expected number of visits to `x` (counting time 0) before the walk
/// started at `x` leaves the set `A`.
pub fn green_function_finite(env: &Environment, set_a: &[usize], x: usize) -> Result<f64> {
    let g = env.graph();
    let n = g.vertex_count();
    let mut index = vec![usize::MAX; n];
    for (k, &v) in set_a.iter().enumerate() {
        ensure!(v < n, Usage, "vertex {v} out of range");
        ensure!(index[v] == usize::MAX, Usage, "vertex {v} repeated in A");
        index[v] = k;
    }
    ensure!(index.get(x).is_some_and(|&k| k != usize::MAX), Usage, "x = {x} must belong to A");
    let m = set_a.len();
    // all vertices of A reachable from x must be able to leave A
    let mut leaves = vec![false; m];
    let mut stack: Vec<usize> = (0..m)
        .filter(|&k| g.out_edges(set_a[k]).iter().any(|&e| index[g.head(e)] == usize::MAX))
        .collect();
    for &k in &stack {
        leaves[k] = true;
    }
    while let Some(k) = stack.pop() {
        for &e in g.in_edges(set_a[k]) {
            let j = index[g.tail(e)];
            if j != usize::MAX && !leaves[j] {
                leaves[j] = true;
                stack.push(j);
            }
        }
    }
    let mut seen = vec![false; m];
    let mut stack = vec![index[x]];
    seen[index[x]] = true;
    while let Some(k) = stack.pop() {
        if !leaves[k] {
            return Err(Error::Structural(format!("the walk cannot leave A from vertex {}", set_a[k])));
        }
        for &e in g.out_edges(set_a[k]) {
            let j = index[g.head(e)];
            if j != usize::MAX && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    // (I − P_A) u = e_x  gives u(y) = G_A(y, x)
    let mut a = SparseMatrix::new(m);
    for (k, &v) in set_a.iter().enumerate() {
        a.add(k, k, 1.0);
        for &e in g.out_edges(v) {
            let j = index[g.head(e)];
            if j != usize::MAX {
                a.add(k, j, -env.prob(e));
            }
        }
    }
    // vertices of A that cannot leave but are unreachable from x make the
    // system singular; give them a trivial equation instead
    for k in 0..m {
        if !leaves[k] && !seen[k] {
            a = replace_row_with_identity(a, k);
        }
    }
    let mut b = vec![0.0; m];
    b[index[x]] = 1.0;
    let u = linalg::solve(&a, &b)?;
    check_residual(&a, &u, &b)?;
    Ok(u[index[x]])
}

fn replace_row_with_identity(a: SparseMatrix, k: usize) -> SparseMatrix {
    let n = a.n();
    let mut out = SparseMatrix::new(n);
    for i in 0..n {
        if i == k {
            out.add(k, k, 1.0);
        } else {
            for &(j, v) in a.row(i) {
                out.add(i, j, v);
            }
        }
    }
    out
}

fn check_residual(a: &SparseMatrix, x: &[f64], b: &[f64]) -> Result<()> {
    let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let r = a.residual(x, b);
    if r > 1e-10 * scale {
        return Err(Error::Numerical(format!("linear solve residual {r:e}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_segment, sample_environment, WeightedDigraph};
    use crate::RngHandle;
    use std::sync::Arc;

    fn bidirected_triangle() -> Arc<WeightedDigraph> {
        Arc::new(
            WeightedDigraph::new(3, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0), (2, 0, 1.0), (0, 2, 1.0)])
                .unwrap(),
        )
    }

    #[test]
    fn absorption_basics() {
        let g = Arc::new(build_segment(10, 1.0, 1.0).unwrap());
        let n = g.edge_count();
        let mut probs = vec![0.5; n];
        for x in [0, 10] {
            probs[g.out_edges(x)[0]] = 1.0;
        }
        let env = Environment::new(Arc::clone(&g), probs).unwrap();
        assert!((absorption_probability(&env, 5, &[10], &[0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((absorption_probability(&env, 3, &[10], &[0]).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(absorption_probability(&env, 10, &[10], &[0]).unwrap(), 1.0);
        assert!(absorption_probability(&env, 3, &[10], &[10]).is_err());
    }

    #[test]
    fn unreachable_targets_are_structural() {
        let g = Arc::new(WeightedDigraph::new(3, &[(0, 1, 1.0), (1, 0, 1.0), (2, 2, 1.0)]).unwrap());
        let env = Environment::new(g, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(absorption_probability(&env, 0, &[2], &[]), Err(Error::Structural(_))));
    }

    #[test]
    fn returns_via_all_entries_sum_to_one() {
        let g = bidirected_triangle();
        let mut rng = RngHandle::new(5, 0);
        for _ in 0..50 {
            let env = sample_environment(&g, &mut rng).unwrap();
            for x in 0..3 {
                let total: f64 = g
                    .in_edges(x)
                    .iter()
                    .map(|&e| return_via_edge_probability(&env, x, e).unwrap())
                    .sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
        let env = sample_environment(&g, &mut rng).unwrap();
        assert!(return_via_edge_probability(&env, 0, 0).is_err());
    }

    #[test]
    fn unique_entry_returns_surely() {
        let g = Arc::new(WeightedDigraph::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (1, 1, 1.0)]).unwrap());
        let env = sample_environment(&g, &mut RngHandle::new(2, 0)).unwrap();
        assert!((return_via_edge_probability(&env, 0, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_green_function_closed_form() {
        let g = bidirected_triangle();
        let mut rng = RngHandle::new(6, 0);
        for _ in 0..50 {
            let env = sample_environment(&g, &mut rng).unwrap();
            let a = env.prob(g.find_edge(0, 1).unwrap());
            let b = env.prob(g.find_edge(1, 0).unwrap());
            let gf = green_function_finite(&env, &[0, 1], 0).unwrap();
            assert!((gf - 1.0 / (1.0 - a * b)).abs() < 1e-12 * gf);
            assert!((green_function_finite(&env, &[0], 0).unwrap() - 1.0).abs() < 1e-15);
        }
        let env = sample_environment(&g, &mut rng).unwrap();
        assert!(green_function_finite(&env, &[0, 1, 2], 0).is_err());
        assert!(green_function_finite(&env, &[1, 2], 0).is_err());
    }
}
