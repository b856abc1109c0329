//! Linear solves shared by the graph and flow modules.
//!
//! Small systems go through dense LU. Larger ones are permuted with reverse
//! Cuthill–McKee and factored as banded LU with partial pivoting, which keeps
//! lattice-like graphs (cylinders, segments, balls) at `O(n·b²)`. Symmetric
//! positive definite Laplacians can use preconditioned conjugate gradient.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Systems at or below this size are always solved densely.
pub const DENSE_LIMIT: usize = 200;

/// Row-major sparse matrix; duplicate entries are summed on insertion.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            rows: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let row = &mut self.rows[i];
        match row.iter_mut().find(|(c, _)| *c == j) {
            Some(entry) => entry.1 += v,
            None => row.push((j, v)),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Sup-norm of `A x - b`.
    pub fn residual(&self, x: &[f64], b: &[f64]) -> f64 {
        self.mul_vec(x)
            .iter()
            .zip(b)
            .map(|(ax, bi)| (ax - bi).abs())
            .fold(0.0, f64::max)
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }
}

/// A factorization that can be reused for several right-hand sides.
pub enum Factorization {
    Dense(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
    Banded { lu: BandedLu, perm: Vec<usize> },
}

impl Factorization {
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        let n = a.n();
        if n <= DENSE_LIMIT {
            return Self::dense(a);
        }
        let perm = reverse_cuthill_mckee(a);
        let (kl, ku) = bandwidths(a, &perm);
        if 2 * kl + ku + 1 >= n / 2 {
            return Self::dense(a);
        }
        let lu = BandedLu::factor(a, &perm, kl, ku)?;
        Ok(Factorization::Banded { lu, perm })
    }

    pub fn dense(a: &SparseMatrix) -> Result<Self> {
        let lu = a.to_dense().lu();
        if !lu.is_invertible() {
            return Err(Error::Numerical("singular linear system".into()));
        }
        Ok(Factorization::Dense(lu))
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        match self {
            Factorization::Dense(lu) => lu
                .solve(&DVector::from_column_slice(b))
                .map(|x| x.as_slice().to_vec())
                .ok_or_else(|| Error::Numerical("singular linear system".into())),
            Factorization::Banded { lu, perm } => {
                // perm[new] = old
                let pb: Vec<f64> = perm.iter().map(|&old| b[old]).collect();
                let px = lu.solve(&pb);
                let mut x = vec![0.0; b.len()];
                for (new, &old) in perm.iter().enumerate() {
                    x[old] = px[new];
                }
                if x.iter().all(|v| v.is_finite()) {
                    Ok(x)
                } else {
                    Err(Error::Numerical("non-finite solution".into()))
                }
            }
        }
    }
}

/// Solve `A x = b` using the size-based policy.
pub fn solve(a: &SparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    Factorization::new(a)?.solve(b)
}

/// Banded LU with partial pivoting on a permuted matrix.
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    band: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLu {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    fn factor(a: &SparseMatrix, perm: &[usize], kl: usize, ku: usize) -> Result<Self> {
        let n = a.n();
        let width = 2 * kl + ku + 1;
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut lu = BandedLu {
            n,
            kl,
            ku,
            width,
            band: vec![0.0; n * width],
            piv: vec![0; n],
        };
        for old_i in 0..n {
            let i = inv[old_i];
            for &(old_j, v) in a.row(old_i) {
                let j = inv[old_j];
                let k = lu.idx(i, j);
                lu.band[k] += v;
            }
        }
        let scale = lu.band.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.band[lu.idx(k, k)].abs();
            for i in k + 1..=last_row {
                let v = lu.band[lu.idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= scale * 1e-300 || best == 0.0 {
                return Err(Error::Numerical("singular banded system".into()));
            }
            lu.piv[k] = p;
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a_idx, b_idx) = (lu.idx(k, j), lu.idx(p, j));
                    lu.band.swap(a_idx, b_idx);
                }
            }
            let pivot = lu.band[lu.idx(k, k)];
            for i in k + 1..=last_row {
                let ik = lu.idx(i, k);
                let l = lu.band[ik] / pivot;
                lu.band[ik] = l;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        let kj = lu.band[lu.idx(k, j)];
                        let ij = lu.idx(i, j);
                        lu.band[ij] -= l * kj;
                    }
                }
            }
        }
        Ok(lu)
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                x[i] -= self.band[self.idx(i, k)] * xk;
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + self.kl + self.ku).min(n - 1) {
                s -= self.band[self.idx(i, j)] * x[j];
            }
            x[i] = s / self.band[self.idx(i, i)];
        }
        x
    }
}

/// Reverse Cuthill–McKee ordering of the symmetrized sparsity pattern.
/// Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &SparseMatrix) -> Vec<usize> {
    let n = a.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for &(j, _) in a.row(i) {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| degree[v]);
    for &root in &by_degree {
        if visited[root] {
            continue;
        }
        let start = pseudo_peripheral(root, &adj);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| degree[w]);
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn pseudo_peripheral(root: usize, adj: &[Vec<usize>]) -> usize {
    let mut current = root;
    let mut best_ecc = 0;
    for _ in 0..4 {
        let (far, ecc) = bfs_farthest(current, adj);
        if ecc <= best_ecc {
            break;
        }
        best_ecc = ecc;
        current = far;
    }
    current
}

fn bfs_farthest(start: usize, adj: &[Vec<usize>]) -> (usize, usize) {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut far = (start, 0);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                if dist[w] > far.1 || (dist[w] == far.1 && adj[w].len() < adj[far.0].len()) {
                    far = (w, dist[w]);
                }
                queue.push_back(w);
            }
        }
    }
    far
}

fn bandwidths(a: &SparseMatrix, perm: &[usize]) -> (usize, usize) {
    let mut inv = vec![0usize; a.n()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let (mut kl, mut ku) = (0, 0);
    for old_i in 0..a.n() {
        let i = inv[old_i];
        for &(old_j, _) in a.row(old_i) {
            let j = inv[old_j];
            if i > j {
                kl = kl.max(i - j);
            } else {
                ku = ku.max(j - i);
            }
        }
    }
    (kl, ku)
}

/// Jacobi-preconditioned conjugate gradient for symmetric positive definite
/// systems. Stops when `‖r‖₂ ≤ rel_tol · ‖b‖₂`.
pub fn conjugate_gradient(a: &SparseMatrix, b: &[f64], rel_tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = a.n();
    let diag: Vec<f64> = (0..n)
        .map(|i| a.row(i).iter().filter(|(j, _)| *j == i).map(|(_, v)| *v).sum())
        .collect();
    if diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::Numerical("conjugate gradient needs a positive diagonal".into()));
    }
    let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut x = vec![0.0; n];
    if norm_b == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    for _ in 0..max_iter {
        let ap = a.mul_vec(&p);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(Error::Numerical("matrix is not positive definite".into()));
        }
        let step = rz / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let norm_r = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm_r <= rel_tol * norm_b {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::Numerical(format!("conjugate gradient did not converge in {max_iter} iterations")))
}
