use std::fmt::Write as _;

use crate::error::{ensure, Error, Result};
use crate::graph::TorusLayout;
use crate::linalg::{conjugate_gradient, Factorization, SparseMatrix, DENSE_LIMIT};

use super::network::UndirectedNetwork;

const CG_TOL: f64 = 1e-14;

/// Nonnegative flow on directed edges. `edges[k]` is `(tail, head)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowAssignment {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub theta: Vec<f64>,
    /// Resistance of each directed edge, `1/conductance`.
    pub resistance: Vec<f64>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub strength: f64,
}

impl FlowAssignment {
    /// `div θ(x) = Σ_{e out of x} θ(e) − Σ_{e into x} θ(e)`.
    pub fn divergence(&self) -> Vec<f64> {
        let mut div = vec![0.0; self.vertex_count];
        for (&(t, h), &f) in self.edges.iter().zip(&self.theta) {
            div[t] += f;
            div[h] -= f;
        }
        div
    }

    /// `Σ_e r_e θ(e)²`; for unit conductances this is the squared L2 norm.
    pub fn energy(&self) -> f64 {
        self.theta.iter().zip(&self.resistance).map(|(f, r)| r * f * f).sum()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.theta.iter().map(|f| f * f).sum()
    }

    pub fn max_theta(&self) -> f64 {
        self.theta.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_theta(&self) -> f64 {
        self.theta.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Rows `tail,head,theta`, header included.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("tail,head,theta\n");
        for (&(t, h), f) in self.edges.iter().zip(&self.theta) {
            let _ = writeln!(s, "{t},{h},{f}");
        }
        s
    }
}

/// Vertices reachable from `x` in the network, ignoring direction.
fn component(net: &UndirectedNetwork, x: usize) -> Vec<bool> {
    let adj = net.adjacency();
    let mut seen = vec![false; net.vertex_count()];
    let mut stack = vec![x];
    seen[x] = true;
    while let Some(v) = stack.pop() {
        for &(w, _) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Potentials for unit current from `x` into the grounded set `sinks`.
/// Vertices outside the component of `x` get NaN.
fn unit_potentials(net: &UndirectedNetwork, x: usize, sinks: &[usize]) -> Result<Vec<f64>> {
    let n = net.vertex_count();
    ensure!(x < n, Usage, "source {x} out of range");
    ensure!(!sinks.is_empty(), Usage, "sink set is empty");
    ensure!(sinks.iter().all(|&s| s < n), Usage, "sink out of range");
    ensure!(!sinks.contains(&x), Usage, "source lies in the sink set");
    let reach = component(net, x);
    ensure!(
        sinks.iter().any(|&s| reach[s]),
        Structural,
        "sink set is not connected to vertex {x}"
    );
    let mut grounded = vec![false; n];
    for &s in sinks {
        grounded[s] = true;
    }
    // unknowns: reachable, ungrounded vertices
    let mut index = vec![usize::MAX; n];
    let mut m = 0;
    for v in 0..n {
        if reach[v] && !grounded[v] {
            index[v] = m;
            m += 1;
        }
    }
    let mut lap = SparseMatrix::new(m);
    for (k, &(a, b)) in net.edges().iter().enumerate() {
        if a == b || !reach[a] {
            continue;
        }
        let c = net.conductance(k);
        let (ia, ib) = (index[a], index[b]);
        if ia != usize::MAX {
            lap.add(ia, ia, c);
        }
        if ib != usize::MAX {
            lap.add(ib, ib, c);
        }
        if ia != usize::MAX && ib != usize::MAX {
            lap.add(ia, ib, -c);
            lap.add(ib, ia, -c);
        }
    }
    let mut rhs = vec![0.0; m];
    rhs[index[x]] = 1.0;
    let sol = if m <= DENSE_LIMIT {
        Factorization::dense(&lap)?.solve(&rhs)?
    } else {
        conjugate_gradient(&lap, &rhs, CG_TOL, 20 * m + 1000)?
    };
    let mut v = vec![f64::NAN; n];
    for u in 0..n {
        if grounded[u] {
            v[u] = 0.0;
        } else if index[u] != usize::MAX {
            v[u] = sol[index[u]];
        }
    }
    Ok(v)
}

/// Effective resistance between `x` and the set `boundary`, all boundary
/// vertices held at potential zero.
pub fn effective_resistance(net: &UndirectedNetwork, x: usize, boundary: &[usize]) -> Result<f64> {
    let v = unit_potentials(net, x, boundary)?;
    let r = v[x];
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Numerical(format!("nonpositive effective resistance {r}")));
    }
    Ok(r)
}

/// Unit current flow from `x` to the grounded set `sinks`, split onto
/// directed edges: bond `k = {a, b}` becomes `2k: a→b` and `2k+1: b→a`, and
/// the current goes on the edge oriented along it, zero on the other.
pub fn thomson_unit_flow(net: &UndirectedNetwork, x: usize, sinks: &[usize]) -> Result<FlowAssignment> {
    let v = unit_potentials(net, x, sinks)?;
    let mut edges = Vec::with_capacity(2 * net.edge_count());
    let mut theta = Vec::with_capacity(2 * net.edge_count());
    let mut resistance = Vec::with_capacity(2 * net.edge_count());
    for (k, &(a, b)) in net.edges().iter().enumerate() {
        let c = net.conductance(k);
        let i = if v[a].is_nan() || a == b { 0.0 } else { c * (v[a] - v[b]) };
        edges.push((a, b));
        edges.push((b, a));
        theta.push(i.max(0.0));
        theta.push((-i).max(0.0));
        resistance.push(1.0 / c);
        resistance.push(1.0 / c);
    }
    Ok(FlowAssignment {
        vertex_count: net.vertex_count(),
        edges,
        theta,
        resistance,
        sources: vec![x],
        sinks: sinks.to_vec(),
        strength: 1.0,
    })
}

/// `θ = N^{-d} Σ_y θ^{(x0,y)}` on the unit-conductance torus, where each
/// `θ^{(x0,y)}` is the split unit current flow from `x0` to `y`. Edges are
/// indexed as in `build_torus`: `2d·x + j`.
pub fn averaged_flow(layout: TorusLayout, x0: usize) -> Result<FlowAssignment> {
    let TorusLayout { d, n } = layout;
    ensure!(d >= 1 && n >= 1, Usage, "torus needs d ≥ 1 and N ≥ 1");
    let count = n.pow(d as u32);
    ensure!(x0 < count, Usage, "base vertex {x0} out of range");
    let mut edges = Vec::with_capacity(2 * d * count);
    for x in 0..count {
        for j in 0..2 * d {
            edges.push((x, layout.step(x, j)));
        }
    }
    let mut theta = vec![0.0; edges.len()];
    let sinks: Vec<usize> = (0..count).filter(|&y| y != x0).collect();
    if count > 1 {
        // ground x0 once; every target y is one more right-hand side
        let index = |v: usize| if v < x0 { v } else { v - 1 };
        let m = count - 1;
        let mut lap = SparseMatrix::new(m);
        for x in 0..count {
            for i in 0..d {
                let y = layout.step(x, i);
                if x == y {
                    continue;
                }
                if x != x0 {
                    lap.add(index(x), index(x), 1.0);
                }
                if y != x0 {
                    lap.add(index(y), index(y), 1.0);
                }
                if x != x0 && y != x0 {
                    lap.add(index(x), index(y), -1.0);
                    lap.add(index(y), index(x), -1.0);
                }
            }
        }
        let factor = Factorization::new(&lap)?;
        let weight = 1.0 / count as f64;
        for &y in &sinks {
            let mut rhs = vec![0.0; m];
            rhs[index(y)] = -1.0;
            let sol = factor.solve(&rhs)?;
            let pot = |v: usize| if v == x0 { 0.0 } else { sol[index(v)] };
            for x in 0..count {
                for i in 0..d {
                    let z = layout.step(x, i);
                    let current = pot(x) - pot(z);
                    if current > 0.0 {
                        theta[layout.edge(x, i)] += weight * current;
                    } else {
                        theta[layout.edge(z, d + i)] -= weight * current;
                    }
                }
            }
        }
    }
    let len = edges.len();
    Ok(FlowAssignment {
        vertex_count: count,
        edges,
        theta,
        resistance: vec![1.0; len],
        sources: vec![x0],
        sinks,
        strength: (count - 1) as f64 / count as f64,
    })
}
