use std::sync::Arc;

use rand::Rng;

use crate::error::{ensure, Error, Result};
use crate::graph::digraph::{edge_list, WeightedDigraph};
use crate::linalg::{self, SparseMatrix};
use crate::sampling::Dirichlet;

/// Transition probabilities `ω_e`, normalized over the outgoing edges of
/// every vertex.
#[derive(Debug, Clone)]
pub struct Environment {
    graph: Arc<WeightedDigraph>,
    probs: Vec<f64>,
}

impl Environment {
    pub fn new(graph: Arc<WeightedDigraph>, probs: Vec<f64>) -> Result<Self> {
        ensure!(probs.len() == graph.edge_count(), Usage, "expected {} probabilities", graph.edge_count());
        ensure!(
            probs.iter().all(|&p| p > 0.0 && p <= 1.0),
            ParameterDomain,
            "transition probabilities must lie in (0, 1]"
        );
        for x in 0..graph.vertex_count() {
            let s: f64 = graph.out_edges(x).iter().map(|&e| probs[e]).sum();
            ensure!((s - 1.0).abs() <= 1e-12, ParameterDomain, "probabilities at vertex {x} sum to {s}");
        }
        Ok(Self { graph, probs })
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<WeightedDigraph> {
        Arc::clone(&self.graph)
    }

    pub fn prob(&self, e: usize) -> f64 {
        self.probs[e]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Smallest transition probability; values at `f64::MIN_POSITIVE` mean the
    /// sampler hit its underflow floor.
    pub fn min_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Edge-list serialization with probabilities in the weight column.
    pub fn to_edge_list(&self) -> String {
        edge_list(&self.graph, &self.probs)
    }
}

/// Per-vertex Dirichlet samplers prepared once for repeated environment draws.
#[derive(Debug, Clone)]
pub struct EnvironmentSampler {
    graph: Arc<WeightedDigraph>,
    vertex: Vec<Dirichlet>,
}

impl EnvironmentSampler {
    pub fn new(graph: Arc<WeightedDigraph>) -> Result<Self> {
        let vertex = (0..graph.vertex_count())
            .map(|x| {
                let w: Vec<f64> = graph.out_edges(x).iter().map(|&e| graph.weight(e)).collect();
                Dirichlet::new(&w)
            })
            .collect::<Result<_>>()?;
        Ok(Self { graph, vertex })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Environment {
        let g = &self.graph;
        let mut probs = vec![0.0; g.edge_count()];
        let mut buf = Vec::new();
        for (x, dir) in self.vertex.iter().enumerate() {
            let out = g.out_edges(x);
            buf.resize(out.len(), 0.0);
            dir.sample_into(rng, &mut buf);
            for (&e, &p) in out.iter().zip(&buf) {
                probs[e] = p;
            }
        }
        Environment {
            graph: Arc::clone(&self.graph),
            probs,
        }
    }
}

/// Independent `Dirichlet((α_e)_{tail(e) = x})` at every vertex.
pub fn sample_environment<R: Rng + ?Sized>(graph: &Arc<WeightedDigraph>, rng: &mut R) -> Result<Environment> {
    Ok(EnvironmentSampler::new(Arc::clone(graph))?.sample(rng))
}

/// The invariant probability of the quenched chain, from `(Pᵀ − I)π = 0`
/// with the last equation replaced by `Σπ = 1`.
pub fn invariant_measure(env: &Environment) -> Result<Vec<f64>> {
    let g = env.graph();
    ensure!(g.is_strongly_connected(), Structural, "invariant measure needs a strongly connected graph");
    let n = g.vertex_count();
    let mut a = SparseMatrix::new(n);
    for e in 0..g.edge_count() {
        let (x, y) = (g.tail(e), g.head(e));
        if y != n - 1 {
            a.add(y, x, env.prob(e));
        }
    }
    for x in 0..n - 1 {
        a.add(x, x, -1.0);
    }
    for x in 0..n {
        a.add(n - 1, x, 1.0);
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let pi = linalg::solve(&a, &b)?;
    let mut flow = vec![0.0; n];
    for e in 0..g.edge_count() {
        flow[g.head(e)] += pi[g.tail(e)] * env.prob(e);
    }
    let residual = flow.iter().zip(&pi).map(|(f, p)| (f - p).abs()).fold(0.0, f64::max);
    if residual > 1e-10 || pi.iter().any(|&p| p <= 0.0) {
        return Err(Error::Numerical(format!("invariant measure residual {residual:e}")));
    }
    Ok(pi)
}

/// Time reversal: `ω̌_{(y,x)} = π(x) ω_{(x,y)} / π(y)` on the reversed graph.
/// Edge `e` of the result is edge `e` of the input turned around, and carries
/// the reversed weights `α̌_ě = α_e`.
pub fn reverse_environment(env: &Environment) -> Result<Environment> {
    let pi = invariant_measure(env)?;
    let g = env.graph();
    let reversed = Arc::new(g.reversed()?);
    let mut probs: Vec<f64> = (0..g.edge_count())
        .map(|e| pi[g.tail(e)] * env.prob(e) / pi[g.head(e)])
        .collect();
    for y in 0..reversed.vertex_count() {
        let out = reversed.out_edges(y);
        let s: f64 = out.iter().map(|&e| probs[e]).sum();
        for &e in out {
            probs[e] = (probs[e] / s).min(1.0);
        }
    }
    Ok(Environment {
        graph: reversed,
        probs,
    })
}

/// A directed cycle, stored as the sequence of its edges (so that parallel
/// edges stay distinguishable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    edges: Vec<usize>,
}

impl Cycle {
    pub fn new(graph: &WeightedDigraph, edges: Vec<usize>) -> Result<Self> {
        ensure!(!edges.is_empty(), Usage, "a cycle needs at least one edge");
        ensure!(edges.iter().all(|&e| e < graph.edge_count()), Usage, "edge index out of range");
        for (i, &e) in edges.iter().enumerate() {
            let next = edges[(i + 1) % edges.len()];
            ensure!(graph.head(e) == graph.tail(next), Structural, "edges {e} and {next} are not consecutive");
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// `x_0, …, x_{n−1}` (the closing `x_n = x_0` is implied).
    pub fn vertices(&self, graph: &WeightedDigraph) -> Vec<usize> {
        self.edges.iter().map(|&e| graph.tail(e)).collect()
    }

    /// The same cycle traversed backwards on the reversed graph.
    pub fn reversed(&self) -> Cycle {
        Cycle {
            edges: self.edges.iter().rev().copied().collect(),
        }
    }

    /// `ω_σ = ∏ ω_e`.
    pub fn weight(&self, env: &Environment) -> f64 {
        self.edges.iter().map(|&e| env.prob(e)).product()
    }
}
