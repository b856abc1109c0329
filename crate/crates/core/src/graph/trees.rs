//! Spanning-tree sums and the occupation-measure density.

use nalgebra::DMatrix;

use crate::error::{ensure, Error, Result};
use crate::graph::digraph::{divergence, WeightedDigraph};
use crate::sampling::special::log_gamma;

/// `Σ_{T ∈ 𝒯_{x0}} ∏_{e∈T} z_e` over spanning trees directed towards `x0`,
/// as the principal minor (row and column `x0` removed) of `D_out − A`.
/// Self-loops cancel on the diagonal.
pub fn matrix_tree_minor(graph: &WeightedDigraph, z: &[f64], x0: usize) -> Result<f64> {
    let n = graph.vertex_count();
    ensure!(z.len() == graph.edge_count(), Usage, "expected {} edge values", graph.edge_count());
    ensure!(x0 < n, Usage, "root {x0} out of range");
    if n == 1 {
        return Ok(1.0);
    }
    let idx = |v: usize| if v < x0 { v } else { v - 1 };
    let mut m = DMatrix::<f64>::zeros(n - 1, n - 1);
    for (e, &ze) in z.iter().enumerate() {
        let (t, h) = (graph.tail(e), graph.head(e));
        if t == h || t == x0 {
            continue;
        }
        m[(idx(t), idx(t))] += ze;
        if h != x0 {
            m[(idx(t), idx(h))] -= ze;
        }
    }
    Ok(m.lu().determinant())
}

/// Density of the normalized edge occupation `(Z_e)` with respect to
/// Lebesgue measure on the free coordinates of `{z : z_{e0} = 1, div z = 0}`:
///
/// `∏_x Γ(α_x) / ∏_e Γ(α_e) · ∏_e z_e^{α_e−1} / ∏_x z_x^{α_x} · Σ_{T∈𝒯_{x0}} ∏_{e∈T} z_e`
///
/// with `α` the graph weights and `z_x` the out-sum of `z` at `x`.
pub fn occupation_density(graph: &WeightedDigraph, z: &[f64], e0: usize, x0: usize) -> Result<f64> {
    ensure!(z.len() == graph.edge_count(), Usage, "expected {} edge values", graph.edge_count());
    ensure!(e0 < graph.edge_count(), Usage, "edge {e0} out of range");
    ensure!(z.iter().all(|&v| v > 0.0 && v.is_finite()), ParameterDomain, "z must be positive");
    ensure!((z[e0] - 1.0).abs() <= 1e-12, ParameterDomain, "z must equal 1 on e0, got {}", z[e0]);
    let scale: f64 = z.iter().sum();
    let div = divergence(graph, z);
    let worst = div.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ensure!(worst <= 1e-9 * scale, ParameterDomain, "z must be divergence free (|div| = {worst:e})");
    ensure!(graph.is_strongly_connected(), Structural, "the density needs a strongly connected graph");

    let mut log = 0.0;
    for x in 0..graph.vertex_count() {
        let ax = graph.out_weight(x);
        let zx: f64 = graph.out_edges(x).iter().map(|&e| z[e]).sum();
        log += log_gamma(ax)? - ax * zx.ln();
    }
    for (e, &ze) in z.iter().enumerate() {
        let ae = graph.weight(e);
        log += (ae - 1.0) * ze.ln() - log_gamma(ae)?;
    }
    let trees = matrix_tree_minor(graph, z, x0)?;
    if trees <= 0.0 {
        return Err(Error::Numerical(format!("non-positive tree sum {trees}")));
    }
    Ok((log + trees.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use crate::RngHandle;
    use proptest::prelude::*;
    use rand::Rng;

    /// Every non-root vertex picks one non-loop outgoing edge; keep the
    /// choices where following them always reaches the root.
    fn brute_force_trees(g: &WeightedDigraph, z: &[f64], x0: usize) -> f64 {
        let n = g.vertex_count();
        let choices: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if v == x0 {
                    vec![usize::MAX]
                } else {
                    g.out_edges(v).iter().copied().filter(|&e| g.head(e) != v).collect()
                }
            })
            .collect();
        let mut total = 0.0;
        let mut pick = vec![0usize; n];
        loop {
            if choices.iter().all(|c| !c.is_empty()) {
                let parent = |v: usize| g.head(choices[v][pick[v]]);
                let acyclic = (0..n).all(|mut v| {
                    for _ in 0..n {
                        if v == x0 {
                            return true;
                        }
                        v = parent(v);
                    }
                    v == x0
                });
                if acyclic {
                    total += (0..n).filter(|&v| v != x0).map(|v| z[choices[v][pick[v]]]).product::<f64>();
                }
            } else {
                return 0.0;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return total;
                }
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn spot_values() {
        let g = WeightedDigraph::new(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert!((matrix_tree_minor(&g, &[2.0, 3.0], 0).unwrap() - 3.0).abs() < 1e-14);
        let tri = WeightedDigraph::new(
            3,
            &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0), (2, 0, 1.0), (0, 2, 1.0)],
        )
        .unwrap();
        for x0 in 0..3 {
            assert!((matrix_tree_minor(&tri, &[1.0; 6], x0).unwrap() - 3.0).abs() < 1e-12);
            assert!((brute_force_trees(&tri, &[1.0; 6], x0) - 3.0).abs() < 1e-12);
        }
    }

    fn random_strong_graph(rng: &mut RngHandle, n: usize) -> WeightedDigraph {
        loop {
            let mut edges: Vec<(usize, usize, f64)> = (0..n).map(|v| (v, (v + 1) % n, 1.0)).collect();
            let extra = rng.random_range(0..2 * n);
            for _ in 0..extra {
                edges.push((rng.random_range(0..n), rng.random_range(0..n), 1.0));
            }
            let g = WeightedDigraph::new(n, &edges).unwrap();
            if g.is_strongly_connected() {
                return g;
            }
        }
    }

    proptest! {
        #[test]
        fn minor_matches_enumeration(seed in any::<u64>(), n in 1usize..=5) {
            let mut rng = RngHandle::new(seed, 0);
            let g = random_strong_graph(&mut rng, n);
            let z: Vec<f64> = (0..g.edge_count()).map(|_| rng.random_range(0.1..3.0)).collect();
            for x0 in 0..n {
                let a = matrix_tree_minor(&g, &z, x0).unwrap();
                let b = brute_force_trees(&g, &z, x0);
                prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn two_vertex_density_normalizes() {
        // a→b twice and b→a twice; fix z_{e0}=1 on the first a→b edge. The
        // free coordinates are t = z(second a→b) and s = z(first b→a), with
        // z(second b→a) = 1 + t − s ∈ (0, ∞) forcing s < 1 + t.
        let g = WeightedDigraph::new(2, &[(0, 1, 1.5), (0, 1, 0.7), (1, 0, 1.2), (1, 0, 0.9)]).unwrap();
        let density = |t: f64, s: f64| {
            let z = [1.0, t, s, 1.0 + t - s];
            occupation_density(&g, &z, 0, 0).unwrap()
        };
        // t = u/(1−u) maps (0,1) onto (0,∞); s = (1+t)·v.
        let inner = |u: f64| {
            let t = u / (1.0 - u);
            let jac = 1.0 / (1.0 - u).powi(2);
            let f = |v: f64| density(t, (1.0 + t) * v) * (1.0 + t);
            quad::integrate(f, 0.0, 1.0, 1e-13, 1e-10).unwrap() * jac
        };
        let total = quad::integrate(inner, 0.0, 1.0, 1e-10, 1e-9).unwrap();
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn density_rejects_invalid_points() {
        let g = WeightedDigraph::new(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert!(occupation_density(&g, &[1.0, 1.0], 0, 0).is_ok());
        assert!(occupation_density(&g, &[1.0, 2.0], 0, 0).is_err());
        assert!(occupation_density(&g, &[2.0, 2.0], 0, 0).is_err());
        assert!(occupation_density(&g, &[1.0, -1.0], 0, 0).is_err());
    }
}
