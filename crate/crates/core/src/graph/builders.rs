//! Graph constructions on pieces of `Z^d`. Lattice directions are indexed
//! `e_1, …, e_d, −e_1, …, −e_d`, matching the weight vector `α_1, …, α_{2d}`.

use crate::error::{ensure, Result};
use crate::graph::digraph::WeightedDigraph;

/// Index bookkeeping for [`build_torus`]. Vertex `x` has coordinates
/// `x = Σ c_i N^i`; its edge in direction `j` has index `2d·x + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusLayout {
    pub d: usize,
    pub n: usize,
}

impl TorusLayout {
    pub fn vertex(&self, coords: &[usize]) -> usize {
        coords.iter().rev().fold(0, |acc, &c| acc * self.n + c % self.n)
    }

    pub fn coords(&self, mut x: usize) -> Vec<usize> {
        (0..self.d)
            .map(|_| {
                let c = x % self.n;
                x /= self.n;
                c
            })
            .collect()
    }

    pub fn edge(&self, x: usize, direction: usize) -> usize {
        2 * self.d * x + direction
    }

    pub fn step(&self, x: usize, direction: usize) -> usize {
        let mut c = self.coords(x);
        let i = direction % self.d;
        c[i] = if direction < self.d { (c[i] + 1) % self.n } else { (c[i] + self.n - 1) % self.n };
        self.vertex(&c)
    }
}

fn check_weights(d: usize, alpha: &[f64]) -> Result<()> {
    ensure!(d >= 1, Usage, "dimension must be at least 1");
    ensure!(alpha.len() == 2 * d, Usage, "expected {} lattice weights, got {}", 2 * d, alpha.len());
    ensure!(alpha.iter().all(|&a| a > 0.0), ParameterDomain, "lattice weights must be positive");
    Ok(())
}

/// The torus `(Z/NZ)^d` with translation-invariant weights.
pub fn build_torus(d: usize, n: usize, alpha: &[f64]) -> Result<(WeightedDigraph, TorusLayout)> {
    check_weights(d, alpha)?;
    ensure!(n >= 1, Usage, "torus side must be at least 1");
    let layout = TorusLayout { d, n };
    let count = n.pow(d as u32);
    let mut edges = Vec::with_capacity(2 * d * count);
    for x in 0..count {
        for (j, &a) in alpha.iter().enumerate() {
            edges.push((x, layout.step(x, j), a));
        }
    }
    Ok((WeightedDigraph::new(count, &edges)?, layout))
}

fn lattice_step(point: &[i64], direction: usize, d: usize) -> Vec<i64> {
    let mut p = point.to_vec();
    if direction < d {
        p[direction] += 1;
    } else {
        p[direction - d] -= 1;
    }
    p
}

/// Lattice points of the Euclidean ball `|x|₂ ≤ N` in a fixed order, the
/// origin first.
pub fn ball_points(d: usize, n: usize) -> Vec<Vec<i64>> {
    let r = n as i64;
    let mut points = Vec::new();
    let mut p = vec![-r; d];
    loop {
        if p.iter().map(|c| c * c).sum::<i64>() <= r * r {
            points.push(p.clone());
        }
        let mut k = 0;
        loop {
            if k == d {
                points.sort_by_key(|q| q.iter().map(|c| c * c).sum::<i64>());
                return points;
            }
            p[k] += 1;
            if p[k] <= r {
                break;
            }
            p[k] = -r;
            k += 1;
        }
    }
}

/// Ball of radius `N` in `Z^d` with every outside neighbor merged into a
/// boundary vertex `∂` (the last vertex). Edges leaving the ball go to `∂`;
/// `∂` sends an edge of weight `α_j` to every ball point whose `−step_j`
/// neighbor lies outside, and the special edge `(∂, 0)` of weight `γ`.
/// Then `div α = γ(δ_∂ − δ_0)`. Vertex 0 is the origin.
pub fn build_ball(d: usize, n: usize, alpha: &[f64], gamma: f64) -> Result<WeightedDigraph> {
    check_weights(d, alpha)?;
    ensure!(n >= 1, Usage, "ball radius must be at least 1");
    ensure!(gamma > 0.0, ParameterDomain, "special edge weight must be positive");
    let points = ball_points(d, n);
    let boundary = points.len();
    let index: std::collections::HashMap<&[i64], usize> =
        points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for (x, p) in points.iter().enumerate() {
        for (j, &a) in alpha.iter().enumerate() {
            let q = lattice_step(p, j, d);
            edges.push((x, index.get(q.as_slice()).copied().unwrap_or(boundary), a));
        }
    }
    for (x, p) in points.iter().enumerate() {
        for (j, &a) in alpha.iter().enumerate() {
            let back = if j < d { j + d } else { j - d };
            if !index.contains_key(lattice_step(p, back, d).as_slice()) {
                edges.push((boundary, x, a));
            }
        }
    }
    edges.push((boundary, 0, gamma));
    WeightedDigraph::new(boundary + 1, &edges)
}

/// The cylinder `G_{N,L}`: columns `0..L` along `e_1`, `N` rows along `e_2`
/// with top and bottom identified, exit vertices `L` and `R`, and the long
/// edge `(R, L)` of weight `N(α_1 − α_3)` that makes the weights
/// divergence free.
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub graph: WeightedDigraph,
    pub n: usize,
    pub l: usize,
    pub left: usize,
    pub right: usize,
}

impl Cylinder {
    /// Vertex at column `col`, row `row`.
    pub fn vertex(&self, col: usize, row: usize) -> usize {
        col * self.n + row % self.n
    }
}

pub fn build_cylinder(n: usize, l: usize, alpha: &[f64]) -> Result<Cylinder> {
    check_weights(2, alpha)?;
    ensure!(n >= 1 && l >= 1, Usage, "cylinder sizes must be at least 1");
    ensure!(
        alpha[0] > alpha[2],
        ParameterDomain,
        "the cylinder needs α_1 > α_3 (drift towards e_1), got {} ≤ {}",
        alpha[0],
        alpha[2]
    );
    let v = |c: usize, r: usize| c * n + r % n;
    let left = n * l;
    let right = left + 1;
    let mut edges = Vec::with_capacity(4 * n * l + 2 * n + 1);
    for c in 0..l {
        for r in 0..n {
            let x = v(c, r);
            edges.push((x, if c + 1 < l { v(c + 1, r) } else { right }, alpha[0]));
            edges.push((x, v(c, r + 1), alpha[1]));
            edges.push((x, if c > 0 { v(c - 1, r) } else { left }, alpha[2]));
            edges.push((x, v(c, r + n - 1), alpha[3]));
        }
    }
    for r in 0..n {
        edges.push((left, v(0, r), alpha[0]));
        edges.push((right, v(l - 1, r), alpha[2]));
    }
    edges.push((right, left, n as f64 * (alpha[0] - alpha[2])));
    Ok(Cylinder {
        graph: WeightedDigraph::new(n * l + 2, &edges)?,
        n,
        l,
        left,
        right,
    })
}

/// The path `0, 1, …, L`: interior vertices step right with weight `α`
/// and left with weight `β`; the endpoints have a single inward edge.
pub fn build_segment(l: usize, alpha: f64, beta: f64) -> Result<WeightedDigraph> {
    ensure!(l >= 1, Usage, "segment length must be at least 1");
    ensure!(alpha > 0.0 && beta > 0.0, ParameterDomain, "segment weights must be positive");
    let mut edges = vec![(0, 1, alpha)];
    for x in 1..l {
        edges.push((x, x + 1, alpha));
        edges.push((x, x - 1, beta));
    }
    edges.push((l, l - 1, beta));
    WeightedDigraph::new(l + 1, &edges)
}
