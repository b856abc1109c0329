use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{ensure, Result};
use crate::graph::{ball_points, TorusLayout};

/// Undirected multigraph with positive conductances.
#[derive(Debug, Clone, PartialEq)]
pub struct UndirectedNetwork {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    conductance: Vec<f64>,
}

impl UndirectedNetwork {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)], conductance: &[f64]) -> Result<Self> {
        ensure!(vertex_count > 0, Usage, "network needs at least one vertex");
        ensure!(edges.len() == conductance.len(), Usage, "one conductance per edge is required");
        ensure!(
            edges.iter().all(|&(a, b)| a < vertex_count && b < vertex_count),
            Usage,
            "edge endpoint out of range"
        );
        ensure!(conductance.iter().all(|&c| c > 0.0), ParameterDomain, "conductances must be positive");
        Ok(Self {
            vertex_count,
            edges: edges.to_vec(),
            conductance: conductance.to_vec(),
        })
    }

    pub fn unit(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(vertex_count, edges, &vec![1.0; edges.len()])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn conductance(&self, k: usize) -> f64 {
        self.conductance[k]
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        adj
    }

    /// Unit-conductance bonds of the Euclidean ball `|x|₂ ≤ N` in `Z^d`,
    /// with all outside points merged into one boundary vertex (the last).
    /// Vertex 0 is the origin.
    pub fn lattice_ball(d: usize, n: usize) -> Result<Self> {
        ensure!(d >= 1 && n >= 1, Usage, "ball needs d ≥ 1 and N ≥ 1");
        let points = ball_points(d, n);
        let boundary = points.len();
        let index: HashMap<&[i64], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut edges = Vec::new();
        for (x, p) in points.iter().enumerate() {
            for i in 0..d {
                for delta in [1i64, -1] {
                    let mut q = p.clone();
                    q[i] += delta;
                    match index.get(q.as_slice()) {
                        // interior bonds once, from the + side
                        Some(&y) => {
                            if delta == 1 {
                                edges.push((x, y));
                            }
                        }
                        None => edges.push((x, boundary)),
                    }
                }
            }
        }
        Self::unit(boundary + 1, &edges)
    }

    /// Unit-conductance torus `(Z/NZ)^d`, one bond `{x, x+e_i}` per vertex
    /// and axis, vertex numbering as in [`TorusLayout`].
    pub fn torus(d: usize, n: usize) -> Result<Self> {
        ensure!(d >= 1 && n >= 1, Usage, "torus needs d ≥ 1 and N ≥ 1");
        let layout = TorusLayout { d, n };
        let count = n.pow(d as u32);
        let edges: Vec<(usize, usize)> = (0..count)
            .flat_map(|x| (0..d).map(move |i| (x, layout.step(x, i))))
            .collect();
        Self::unit(count, &edges)
    }

    /// Edge list with a `vertices=<n> edges=<m>` header and `a b conductance` lines.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("vertices={} edges={}\n", self.vertex_count, self.edges.len());
        for (&(a, b), c) in self.edges.iter().zip(&self.conductance) {
            let _ = writeln!(s, "{a} {b} {c}");
        }
        s
    }
}
