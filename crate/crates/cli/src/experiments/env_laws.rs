//! Exact laws on finite graphs: time reversal, return edges, urns, cylinders.

use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{ensure, Result};
use rwde::graph::{
    absorption_probability, build_cylinder, build_torus, return_via_edge_probability, reverse_environment,
    sample_environment, WeightedDigraph,
};
use rwde::par::map_replicas;
use rwde::sampling::special::beta_cdf;
use rwde::sampling::stats::{ks_critical, ks_statistic, mean_and_se};
use rwde::sampling::dirichlet_joint_moment;
use rwde::walk::{annealed_path_probability, enumerate_paths, reinforced_path_probability};

use super::{gather, replica, sub_seed, to_usize, Artifact, Report};
use crate::config::Params;
use crate::verdict::{Measurement, Rule, Tag};

/// Exponent vectors over `k` components with total order in `1..=max`.
fn monomials(k: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut m = vec![0u32; k];
    loop {
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            m[i] += 1;
            if m.iter().sum::<u32>() <= max {
                break;
            }
            m[i] = 0;
            i += 1;
        }
        out.push(m.clone());
    }
}

pub fn reversal_check(p: &mut Params, seed: u64) -> Result<Report> {
    let n = to_usize("torus", p.count("torus", 4)?)?;
    let d = to_usize("dim", p.count("dim", 2)?)?;
    let weights = p.list("weights", &[1.0, 2.0, 1.0, 1.0])?;
    let samples = to_usize("samples", p.count("samples", 100_000)?)?;
    let order = p.count("order", 3)?;
    p.finish()?;
    ensure!(samples >= 2, "--samples must be at least 2");
    ensure!((1..=6).contains(&order), "--order must lie in 1..=6");

    let (g, _) = build_torus(d, n, &weights)?;
    let g = Arc::new(g);
    let sites = g.vertex_count();
    // the reversed vector at y lives on the original in-edges of y
    let layout: Vec<Vec<usize>> = (0..sites).map(|y| g.in_edges(y).to_vec()).collect();
    let width: usize = layout.iter().map(Vec::len).sum();
    let rows = gather(map_replicas(samples, |i| {
        let mut rng = replica(seed, i);
        let env = sample_environment(&g, &mut rng)?;
        let rev = reverse_environment(&env)?;
        Ok(layout.iter().flatten().map(|&e| rev.prob(e)).collect::<Vec<f64>>())
    }))?;

    let mut csv = String::from("site,exponents,empirical,expected,standard_error\n");
    let mut worst_z: f64 = 0.0;
    let mut offset = 0;
    for (y, edges) in layout.iter().enumerate() {
        let w: Vec<f64> = edges.iter().map(|&e| g.weight(e)).collect();
        for m in monomials(edges.len(), order as u32) {
            let exps: Vec<f64> = m.iter().map(|&v| v as f64).collect();
            let want = dirichlet_joint_moment(&w, &exps)?.finite().unwrap_or(f64::NAN);
            let vals: Vec<f64> = rows
                .iter()
                .map(|s| m.iter().enumerate().map(|(j, &k)| s[offset + j].powi(k as i32)).product())
                .collect();
            let (mean, se) = mean_and_se(&vals);
            worst_z = worst_z.max((mean - want).abs() / se);
            let label: Vec<String> = m.iter().map(u32::to_string).collect();
            let _ = writeln!(csv, "{y},{},{mean},{want},{se}", label.join(";"));
        }
        offset += edges.len();
    }

    let site_of: Vec<usize> = layout
        .iter()
        .enumerate()
        .flat_map(|(y, e)| std::iter::repeat_n(y, e.len()))
        .collect();
    let mut mean = vec![0.0; width];
    for s in &rows {
        for (m, v) in mean.iter_mut().zip(s) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= samples as f64);
    let mut cov = vec![0.0; width * width];
    let mut c = vec![0.0; width];
    for s in &rows {
        for ((ci, v), m) in c.iter_mut().zip(s).zip(&mean) {
            *ci = v - m;
        }
        for a in 0..width {
            for b in a..width {
                cov[a * width + b] += c[a] * c[b];
            }
        }
    }
    let mut worst_corr: f64 = 0.0;
    for a in 0..width {
        for b in a + 1..width {
            if site_of[a] != site_of[b] {
                let r = cov[a * width + b] / (cov[a * width + a] * cov[b * width + b]).sqrt();
                worst_corr = worst_corr.max(r.abs());
            }
        }
    }
    Ok(Report {
        measurements: vec![
            Measurement::new("max_moment_z", worst_z, 4.0, Rule::AtMost, 0.0, Tag::Theorem),
            Measurement::new(
                "max_cross_site_abs_correlation",
                worst_corr,
                4.0 / (samples as f64).sqrt(),
                Rule::AtMost,
                0.0,
                Tag::Theorem,
            ),
        ],
        artifacts: vec![Artifact::new("moments.csv", csv)],
    })
}

pub fn return_law(p: &mut Params, seed: u64) -> Result<Report> {
    let k = to_usize("vertices", p.count("vertices", 3)?)?;
    let w = p.f64("weight", 1.0)?;
    let samples = to_usize("samples", p.count("samples", 10_000)?)?;
    p.finish()?;
    ensure!(k >= 3, "--vertices must be at least 3");
    ensure!(samples >= 1, "--samples must be positive");

    let edges: Vec<(usize, usize, f64)> = (0..k)
        .flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| (a, b, w)))
        .collect();
    let g = Arc::new(WeightedDigraph::new(k, &edges)?);
    let entry = g.find_edge(1, 0).ok_or_else(|| anyhow::anyhow!("edge 1→0 missing"))?;
    let (a, b) = (g.weight(entry), g.in_weight(0) - g.weight(entry));
    let probs = gather(map_replicas(samples, |i| {
        let mut rng = replica(seed, i);
        let env = sample_environment(&g, &mut rng)?;
        return_via_edge_probability(&env, 0, entry)
    }))?;
    let d = ks_statistic(&probs, |x| beta_cdf(a, b, x.clamp(0.0, 1.0)).unwrap_or(f64::NAN))?;
    let mut csv = String::from("replica,probability\n");
    for (i, q) in probs.iter().enumerate() {
        let _ = writeln!(csv, "{i},{q}");
    }
    Ok(Report {
        measurements: vec![Measurement::new("ks_statistic", d, ks_critical(samples), Rule::AtMost, 0.0, Tag::Theorem)],
        artifacts: vec![Artifact::new("return_probabilities.csv", csv)],
    })
}

pub fn polya_equivalence(p: &mut Params, _seed: u64) -> Result<Report> {
    let max_len = to_usize("max-len", p.count("max-len", 6)?)?;
    p.finish()?;
    ensure!((1..=8).contains(&max_len), "--max-len must lie in 1..=8");
    let g = WeightedDigraph::new(
        4,
        &[
            (0, 1, 1.0),
            (0, 2, 0.5),
            (1, 2, 2.0),
            (1, 0, 1.0),
            (2, 3, 1.5),
            (2, 2, 0.7),
            (3, 0, 1.0),
            (3, 1, 0.3),
        ],
    )?;
    let mut csv = String::from("start,length,edges,urn,moment\n");
    let mut worst: f64 = 0.0;
    for start in 0..g.vertex_count() {
        for len in 1..=max_len {
            for path in enumerate_paths(&g, start, len) {
                let urn = reinforced_path_probability(&g, start, &path)?;
                let moment = annealed_path_probability(&g, start, &path)?;
                worst = worst.max((urn - moment).abs());
                let label: Vec<String> = path.iter().map(usize::to_string).collect();
                let _ = writeln!(csv, "{start},{len},{},{urn},{moment}", label.join(";"));
            }
        }
    }
    Ok(Report {
        measurements: vec![Measurement::new("max_abs_difference", worst, 0.0, Rule::AtMost, 1e-12, Tag::Theorem)],
        artifacts: vec![Artifact::new("paths.csv", csv)],
    })
}

pub fn transience_cylinder(p: &mut Params, seed: u64) -> Result<Report> {
    let width = to_usize("width", p.count("width", 16)?)?;
    let length = to_usize("length", p.count("length", 64)?)?;
    let weights = p.list("weights", &[2.0, 1.0, 1.0, 1.0])?;
    let envs = to_usize("envs", p.count("envs", 10_000)?)?;
    p.finish()?;
    ensure!(envs >= 2, "--envs must be at least 2");
    ensure!(weights.len() == 4, "--weights needs four values (+e1, +e2, −e1, −e2)");
    let bound = 1.0 - weights[2] / weights[0];

    let mut csv = String::from("length,replica,probability\n");
    let mut stats = Vec::new();
    for (k, l) in [length, 2 * length].into_iter().enumerate() {
        let cyl = build_cylinder(width, l, &weights)?;
        let start = cyl.vertex(0, 0);
        let (left, right) = (cyl.left, cyl.right);
        let g = Arc::new(cyl.graph);
        let ens_seed = sub_seed(seed, k as u64);
        let probs = gather(map_replicas(envs, |i| {
            let mut rng = replica(ens_seed, i);
            let env = sample_environment(&g, &mut rng)?;
            absorption_probability(&env, start, &[right], &[left])
        }))?;
        for (i, q) in probs.iter().enumerate() {
            let _ = writeln!(csv, "{l},{i},{q}");
        }
        stats.push(mean_and_se(&probs));
    }
    let ((m1, se1), (m2, se2)) = (stats[0], stats[1]);
    Ok(Report {
        measurements: vec![
            Measurement::new(format!("mean_L{length}"), m1, bound, Rule::AtLeast, 3.0 * se1, Tag::Theorem),
            Measurement::new(format!("mean_L{}", 2 * length), m2, bound, Rule::AtLeast, 3.0 * se2, Tag::Theorem),
            Measurement::new(
                "doubling_nonincreasing",
                m2,
                m1,
                Rule::AtMost,
                3.0 * (se1 * se1 + se2 * se2).sqrt(),
                Tag::Derived,
            ),
        ],
        artifacts: vec![Artifact::new("probabilities.csv", csv)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_count() {
        // monomials of degree 1..=3 in 4 variables: 4 + 10 + 20
        assert_eq!(monomials(4, 3).len(), 34);
    }
}
