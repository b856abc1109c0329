use std::fmt::Write as _;

use crate::error::{ensure, Error, Result};

/// Finite directed multigraph with positive edge weights. Parallel edges and
/// self-loops are allowed; every vertex must have an outgoing edge.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    tails: Vec<usize>,
    heads: Vec<usize>,
    weights: Vec<f64>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl WeightedDigraph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        ensure!(vertex_count > 0, Usage, "graph needs at least one vertex");
        let mut out_edges = vec![Vec::new(); vertex_count];
        let mut in_edges = vec![Vec::new(); vertex_count];
        let mut tails = Vec::with_capacity(edges.len());
        let mut heads = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(edges.len());
        for (e, &(t, h, w)) in edges.iter().enumerate() {
            ensure!(t < vertex_count && h < vertex_count, Usage, "edge {e} ({t}, {h}) has an invalid endpoint");
            ensure!(w > 0.0 && w.is_finite(), ParameterDomain, "edge {e} has non-positive weight {w}");
            out_edges[t].push(e);
            in_edges[h].push(e);
            tails.push(t);
            heads.push(h);
            weights.push(w);
        }
        if let Some(x) = out_edges.iter().position(Vec::is_empty) {
            return Err(Error::Structural(format!("vertex {x} has no outgoing edge")));
        }
        Ok(Self {
            tails,
            heads,
            weights,
            out_edges,
            in_edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.tails.len()
    }

    pub fn tail(&self, e: usize) -> usize {
        self.tails[e]
    }

    pub fn head(&self, e: usize) -> usize {
        self.heads[e]
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn out_edges(&self, x: usize) -> &[usize] {
        &self.out_edges[x]
    }

    pub fn in_edges(&self, x: usize) -> &[usize] {
        &self.in_edges[x]
    }

    /// `(tail, head, weight)` triples in edge order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.edge_count()).map(|e| (self.tails[e], self.heads[e], self.weights[e]))
    }

    /// First edge from `tail` to `head`, if any.
    pub fn find_edge(&self, tail: usize, head: usize) -> Option<usize> {
        self.out_edges[tail].iter().copied().find(|&e| self.heads[e] == head)
    }

    /// `α_x`: total weight leaving `x`.
    pub fn out_weight(&self, x: usize) -> f64 {
        self.out_edges[x].iter().map(|&e| self.weights[e]).sum()
    }

    /// Total weight entering `x`.
    pub fn in_weight(&self, x: usize) -> f64 {
        self.in_edges[x].iter().map(|&e| self.weights[e]).sum()
    }

    /// Divergence of the weights themselves.
    pub fn weight_divergence(&self) -> Vec<f64> {
        divergence(self, &self.weights)
    }

    /// Same vertices and edge indices with every edge turned around; edge `e`
    /// of the result carries the weight of edge `e` of `self`.
    pub fn reversed(&self) -> Result<Self> {
        let edges: Vec<(usize, usize, f64)> = self.edges().map(|(t, h, w)| (h, t, w)).collect();
        Self::new(self.vertex_count(), &edges)
    }

    /// Same topology with new weights.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        ensure!(weights.len() == self.edge_count(), Usage, "expected {} weights", self.edge_count());
        let edges: Vec<(usize, usize, f64)> =
            (0..self.edge_count()).map(|e| (self.tails[e], self.heads[e], weights[e])).collect();
        Self::new(self.vertex_count(), &edges)
    }

    /// Vertices reachable from `start` (following edges forwards).
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        self.search(start, true)
    }

    /// Vertices from which `target` is reachable.
    pub fn reaching(&self, target: usize) -> Vec<bool> {
        self.search(target, false)
    }

    fn search(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            let list = if forward { &self.out_edges[v] } else { &self.in_edges[v] };
            for &e in list {
                let w = if forward { self.heads[e] } else { self.tails[e] };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Two depth-first passes from vertex 0, forwards and backwards.
    pub fn is_strongly_connected(&self) -> bool {
        self.reachable_from(0).iter().all(|&b| b) && self.reaching(0).iter().all(|&b| b)
    }

    /// Plain-text edge list: a `vertices=<n> edges=<m>` header, then one
    /// `tail head weight` line per edge.
    pub fn to_edge_list(&self) -> String {
        edge_list(self, &self.weights)
    }
}

pub(crate) fn edge_list(graph: &WeightedDigraph, values: &[f64]) -> String {
    let mut s = format!("vertices={} edges={}\n", graph.vertex_count(), graph.edge_count());
    for (e, v) in values.iter().enumerate() {
        let _ = writeln!(s, "{} {} {}", graph.tail(e), graph.head(e), v);
    }
    s
}

/// Parse the format written by [`WeightedDigraph::to_edge_list`].
pub fn parse_edge_list(text: &str) -> Result<WeightedDigraph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Usage("empty edge list".into()))?;
    let mut n = None;
    let mut m = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("vertices", v)) => n = v.parse::<usize>().ok(),
            Some(("edges", v)) => m = v.parse::<usize>().ok(),
            _ => return Err(Error::Usage(format!("bad header field `{field}`"))),
        }
    }
    let (n, m) = n.zip(m).ok_or_else(|| Error::Usage("header needs vertices= and edges=".into()))?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        ensure!(parts.len() == 3, Usage, "bad edge line `{line}`");
        let parse_err = |_| Error::Usage(format!("bad edge line `{line}`"));
        let t = parts[0].parse::<usize>().map_err(parse_err)?;
        let h = parts[1].parse::<usize>().map_err(parse_err)?;
        let w = parts[2].parse::<f64>().map_err(|_| Error::Usage(format!("bad weight in `{line}`")))?;
        edges.push((t, h, w));
    }
    ensure!(edges.len() == m, Usage, "header announces {m} edges, found {}", edges.len());
    WeightedDigraph::new(n, &edges)
}

/// `div θ(x) = Σ_{tail = x} θ_e − Σ_{head = x} θ_e`.
pub fn divergence(graph: &WeightedDigraph, values: &[f64]) -> Vec<f64> {
    let mut div = vec![0.0; graph.vertex_count()];
    for (e, &v) in values.iter().enumerate().take(graph.edge_count()) {
        div[graph.tail(e)] += v;
        div[graph.head(e)] -= v;
    }
    div
}
