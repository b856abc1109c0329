use std::collections::VecDeque;

use crate::error::{ensure, Result};

/// Augmentations and residual edges below this are treated as zero.
const CUTOFF: f64 = 1e-12;

/// Edges from the source side to the sink side of a cut.
#[derive(Debug, Clone, PartialEq)]
pub struct CutSet {
    pub edges: Vec<usize>,
    pub capacity: f64,
    pub source_side: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxFlow {
    pub value: f64,
    /// Flow on each input edge, `0 ≤ flow ≤ capacity`.
    pub flow: Vec<f64>,
    pub cut: CutSet,
}

struct Residual {
    // arc 2k is edge k forward, 2k+1 its reverse
    head: Vec<usize>,
    cap: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let w = self.head[a];
                if self.cap[a] > CUTOFF && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        level
    }

    fn push(&mut self, v: usize, t: usize, limit: f64, level: &[usize], next: &mut [usize]) -> f64 {
        if v == t {
            return limit;
        }
        while next[v] < self.adj[v].len() {
            let a = self.adj[v][next[v]];
            let w = self.head[a];
            if self.cap[a] > CUTOFF && level[w] == level[v] + 1 {
                let pushed = self.push(w, t, limit.min(self.cap[a]), level, next);
                if pushed > CUTOFF {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            next[v] += 1;
        }
        0.0
    }
}

/// Maximum `s → t` flow through directed edges with real capacities
/// (Dinic's algorithm), plus a minimum cut read off the final residual
/// graph. If `t` is unreachable the value is 0 and the cut is empty.
pub fn max_flow_min_cut(
    vertex_count: usize,
    edges: &[(usize, usize)],
    capacities: &[f64],
    s: usize,
    t: usize,
) -> Result<MaxFlow> {
    ensure!(edges.len() == capacities.len(), Usage, "one capacity per edge is required");
    ensure!(s < vertex_count && t < vertex_count, Usage, "terminal out of range");
    ensure!(s != t, Usage, "source and sink coincide");
    ensure!(
        edges.iter().all(|&(a, b)| a < vertex_count && b < vertex_count),
        Usage,
        "edge endpoint out of range"
    );
    ensure!(
        capacities.iter().all(|&c| c > 0.0 && c.is_finite()),
        ParameterDomain,
        "capacities must be positive and finite"
    );
    let mut res = Residual {
        head: Vec::with_capacity(2 * edges.len()),
        cap: Vec::with_capacity(2 * edges.len()),
        adj: vec![Vec::new(); vertex_count],
    };
    for (k, (&(a, b), &c)) in edges.iter().zip(capacities).enumerate() {
        res.head.push(b);
        res.cap.push(c);
        res.head.push(a);
        res.cap.push(0.0);
        res.adj[a].push(2 * k);
        res.adj[b].push(2 * k + 1);
    }
    let mut value = 0.0;
    loop {
        let level = res.levels(s);
        if level[t] == usize::MAX {
            break;
        }
        let mut next = vec![0; vertex_count];
        loop {
            let pushed = res.push(s, t, f64::INFINITY, &level, &mut next);
            if pushed <= CUTOFF {
                break;
            }
            value += pushed;
        }
    }
    let level = res.levels(s);
    let source_side: Vec<bool> = level.iter().map(|&l| l != usize::MAX).collect();
    let cut_edges: Vec<usize> = edges
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| source_side[a] && !source_side[b])
        .map(|(k, _)| k)
        .collect();
    let capacity = cut_edges.iter().map(|&k| capacities[k]).sum();
    let flow = (0..edges.len()).map(|k| (capacities[k] - res.cap[2 * k]).clamp(0.0, capacities[k])).collect();
    Ok(MaxFlow {
        value,
        flow,
        cut: CutSet {
            edges: cut_edges,
            capacity,
            source_side,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_ball;
    use proptest::prelude::*;

    #[test]
    fn single_edge() {
        let r = max_flow_min_cut(2, &[(0, 1)], &[2.5], 0, 1).unwrap();
        assert_eq!(r.value, 2.5);
        assert_eq!(r.cut.edges, vec![0]);
        assert_eq!(r.cut.capacity, 2.5);
    }

    #[test]
    fn unreachable_sink() {
        let r = max_flow_min_cut(3, &[(0, 1), (2, 0)], &[1.0, 1.0], 0, 2).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.cut.edges.is_empty());
        assert!(max_flow_min_cut(2, &[(0, 1)], &[1.0], 0, 0).is_err());
        assert!(max_flow_min_cut(2, &[(0, 1)], &[0.0], 0, 1).is_err());
    }

    #[test]
    fn lattice_ball_cut_is_at_the_origin() {
        let g = build_ball(2, 5, &[1.0; 4], 4.0).unwrap();
        let edges: Vec<_> = g.edges().map(|(t, h, _)| (t, h)).collect();
        let caps: Vec<f64> = g.weights().to_vec();
        let r = max_flow_min_cut(g.vertex_count(), &edges, &caps, 0, g.vertex_count() - 1).unwrap();
        assert_eq!(r.value, 4.0);
        assert_eq!(r.cut.capacity, 4.0);
        let mut cut = r.cut.edges.clone();
        cut.sort();
        let mut origin: Vec<usize> = g.out_edges(0).to_vec();
        origin.sort();
        assert_eq!(cut, origin);
    }

    /// Minimum over all vertex subsets containing `s` but not `t`.
    fn brute_force_cut(n: usize, edges: &[(usize, usize)], caps: &[f64], s: usize, t: usize) -> f64 {
        (0u32..1 << n)
            .filter(|m| m & (1 << s) != 0 && m & (1 << t) == 0)
            .map(|m| {
                edges
                    .iter()
                    .zip(caps)
                    .filter(|(&(a, b), _)| m & (1 << a) != 0 && m & (1 << b) == 0)
                    .map(|(_, c)| c)
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn small_dag() -> impl Strategy<Value = (usize, Vec<(usize, usize)>, Vec<f64>)> {
        (3usize..7).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            proptest::sample::subsequence(pairs.clone(), 1..=pairs.len().min(10)).prop_flat_map(move |edges| {
                let m = edges.len();
                (Just(n), Just(edges), proptest::collection::vec(0.05f64..5.0, m))
            })
        })
    }

    fn check(n: usize, edges: &[(usize, usize)], caps: &[f64]) -> Result<MaxFlow> {
        let r = max_flow_min_cut(n, edges, caps, 0, n - 1)?;
        let mut div = vec![0.0; n];
        for (&(a, b), &f) in edges.iter().zip(&r.flow) {
            div[a] += f;
            div[b] -= f;
        }
        for (v, d) in div.iter().enumerate() {
            let want = if v == 0 { r.value } else if v == n - 1 { -r.value } else { 0.0 };
            assert!((d - want).abs() < 1e-9);
        }
        for (f, c) in r.flow.iter().zip(caps) {
            assert!(*f >= 0.0 && f <= c);
        }
        Ok(r)
    }

    proptest! {
        #[test]
        fn agrees_with_exhaustive_cuts((n, edges, caps) in small_dag()) {
            let r = check(n, &edges, &caps).unwrap();
            let best = brute_force_cut(n, &edges, &caps, 0, n - 1);
            prop_assert!((r.value - best).abs() < 1e-9, "{} vs {}", r.value, best);
            prop_assert!((r.value - r.cut.capacity).abs() < 1e-9);
        }

        #[test]
        fn monotone_in_each_capacity((n, edges, caps) in small_dag(), k in 0usize..10, bump in 0.0f64..3.0) {
            let k = k % edges.len();
            let base = check(n, &edges, &caps).unwrap().value;
            let mut more = caps.clone();
            more[k] += bump;
            let raised = check(n, &edges, &more).unwrap().value;
            prop_assert!(raised >= base - 1e-9);
        }
    }
}
