//! Lattice experiments: κ, traps, direction, growth exponent, accelerated walk.

use std::fmt::Write as _;

use anyhow::{ensure, Result};
use rand::Rng;
use rwde::onedim::{regime_constants, BetaEnvParams};
use rwde::par::map_replicas;
use rwde::sampling::stats::{default_hill_k, hill_tail_exponent, mean_and_se};
use rwde::sampling::Dirichlet;
use rwde::walk::{
    d_alpha, exponent_from_samples, gamma_factor, geometric_grid, kappa, kappa_lambda_box, pair_trap_green,
    quenched_walk, walk_line, AcceleratedWalker, LatticeEnvironment, LatticeWeights, StopRule, WalkOptions,
    WalkRecord,
};

use super::{gather, replica, sub_seed, to_usize, Artifact, Report};
use crate::config::Params;
use crate::verdict::{Measurement, Rule, Tag};

/// Total weight of the edges leaving `{0, e_axis}`, by enumeration.
fn pair_exit_weight(w: &LatticeWeights, axis: usize) -> f64 {
    let d = w.dim();
    let inside = |x: &[i64]| x.iter().enumerate().all(|(i, &c)| c == 0 || (i == axis && c == 1));
    let mut total = 0.0;
    for site in [0i64, 1] {
        let mut x = vec![0i64; d];
        x[axis] = site;
        for dir in 0..2 * d {
            let (i, s) = w.step(dir);
            let mut y = x.clone();
            y[i] += s;
            if !inside(&y) {
                total += w.alpha()[dir];
            }
        }
    }
    total
}

pub fn kappa_table(p: &mut Params, _seed: u64) -> Result<Report> {
    let weights = p.list("weights", &[1.0, 1.0, 1.0, 1.0])?;
    let radius = p.count("radius", 2)?;
    p.finish()?;
    ensure!(radius <= 64, "--radius must be at most 64");
    let w = LatticeWeights::new(&weights)?;
    let k = kappa(&w);
    let by_traps = (0..w.dim()).map(|i| pair_exit_weight(&w, i)).fold(f64::INFINITY, f64::min);
    let mut csv = String::from("quantity,r,value\n");
    let _ = writeln!(csv, "kappa,,{k}");
    for (i, v) in d_alpha(&w).iter().enumerate() {
        let _ = writeln!(csv, "d_alpha_{},,{v}", i + 1);
    }
    for r in 0..=radius as u32 {
        let _ = writeln!(csv, "kappa_lambda,{r},{}", kappa_lambda_box(&w, r));
    }
    Ok(Report {
        measurements: vec![Measurement::new("kappa", k, by_traps, Rule::Absolute, 1e-12, Tag::Trivial)],
        artifacts: vec![Artifact::new("kappa.csv", csv)],
    })
}

pub fn trap_tails(p: &mut Params, seed: u64) -> Result<Report> {
    let weights = p.list("weights", &[0.3, 0.3, 0.3, 0.3])?;
    let samples = to_usize("samples", p.count("samples", 1_000_000)?)?;
    let axis = to_usize("axis", p.count("axis", 0)?)?;
    let tolerance = p.f64("tolerance", 0.15)?;
    p.finish()?;
    let w = LatticeWeights::new(&weights)?;
    ensure!(axis < w.dim(), "--axis must be below the dimension");
    ensure!(samples >= 100, "--samples must be at least 100");
    let k = kappa(&w);
    let sampler = Dirichlet::new(w.alpha())?;
    let chunks = 100;
    let greens: Vec<Vec<f64>> = map_replicas(chunks, |c| {
        let mut rng = replica(seed, c);
        let len = samples / chunks + usize::from(c < samples % chunks);
        (0..len).map(|_| pair_trap_green(&sampler, &w, axis, &mut rng)).collect()
    });
    let greens: Vec<f64> = greens.into_iter().flatten().collect();
    let hill = hill_tail_exponent(&greens, default_hill_k(samples))?;
    let mut csv = String::from("k,hill\n");
    for kk in geometric_grid(10, (samples / 10).max(11) as u64, 30) {
        let _ = writeln!(csv, "{kk},{}", hill_tail_exponent(&greens, kk as usize)?);
    }
    Ok(Report {
        measurements: vec![Measurement::new("hill_exponent", hill, k, Rule::Relative, tolerance, Tag::Theorem)],
        artifacts: vec![Artifact::new("hill.csv", csv)],
    })
}

fn lattice_records(w: &LatticeWeights, seed: u64, replicas: usize, steps: u64, checkpoints: Vec<u64>) -> Result<Vec<WalkRecord>> {
    let opts = WalkOptions {
        checkpoints,
        ..WalkOptions::default()
    };
    let start = vec![0; w.dim()];
    gather(map_replicas(replicas, |i| {
        let mut rng = replica(seed, i);
        let mut env = LatticeEnvironment::new(w.clone(), rng.random())?;
        quenched_walk(&mut env, &start, &StopRule::Horizon(steps), &opts, &mut rng)
    }))
}

fn records_csv(records: &[WalkRecord], dim: usize) -> String {
    let mut csv = WalkRecord::csv_header(dim);
    csv.push('\n');
    for (i, r) in records.iter().enumerate() {
        csv.push_str(&r.csv_rows(i));
    }
    csv
}

pub fn direction(p: &mut Params, seed: u64) -> Result<Report> {
    let weights = p.list("weights", &[2.0, 1.0, 1.0, 1.0])?;
    let steps = p.count("steps", 300_000)?;
    let replicas = to_usize("replicas", p.count("replicas", 20)?)?;
    let angle = p.f64("angle", 0.1)?;
    let fraction = p.f64("fraction", 0.9)?;
    p.finish()?;
    ensure!(replicas >= 1 && steps >= 1, "--replicas and --steps must be positive");
    let w = LatticeWeights::new(&weights)?;
    let dir = d_alpha(&w);
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    ensure!(norm > 0.0, "d_α vanishes; there is no preferred direction");
    let records = lattice_records(&w, seed, replicas, steps, vec![steps])?;
    let close = records
        .iter()
        .filter(|r| {
            let x: Vec<f64> = r.final_position.iter().map(|&c| c as f64).collect();
            let len = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            let cos = x.iter().zip(&dir).map(|(a, b)| a * b).sum::<f64>() / (len * norm);
            len > 0.0 && cos.clamp(-1.0, 1.0).acos() < angle
        })
        .count();
    Ok(Report {
        measurements: vec![Measurement::new(
            "fraction_within_angle",
            close as f64 / replicas as f64,
            fraction,
            Rule::AtLeast,
            0.0,
            Tag::Theorem,
        )],
        artifacts: vec![Artifact::new("positions.csv", records_csv(&records, w.dim()))],
    })
}

pub fn exponent(p: &mut Params, seed: u64) -> Result<Report> {
    let lattice = p.has("weights");
    let (first_default, last_default, points_default, replicas_default, tol_default) = if lattice {
        (1_000, 100_000, 6, 60, 0.2)
    } else {
        (10_000, 1_000_000, 9, 400, 0.15)
    };
    let first = p.count("first", first_default)?;
    let last = p.count("last", last_default)?;
    let points = to_usize("points", p.count("points", points_default)?)?;
    let replicas = to_usize("replicas", p.count("replicas", replicas_default)?)?;
    let tolerance = p.f64("tolerance", tol_default)?;
    ensure!(first >= 1 && last > first, "need 1 ≤ --first < --last");
    ensure!(points >= 2 && replicas >= 1, "need --points ≥ 2 and --replicas ≥ 1");
    let grid = geometric_grid(first, last, points);
    let times: Vec<f64> = grid.iter().map(|&t| t as f64).collect();

    let (samples, expected, positions) = if lattice {
        let weights = p.list("weights", &[])?;
        p.finish()?;
        let w = LatticeWeights::new(&weights)?;
        let dir = d_alpha(&w);
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        ensure!(norm > 0.0, "d_α vanishes; there is no direction to project on");
        let ell: Vec<f64> = dir.iter().map(|x| x / norm).collect();
        let records = lattice_records(&w, seed, replicas, last, grid.clone())?;
        let samples: Vec<Vec<f64>> = (0..grid.len())
            .map(|k| {
                records
                    .iter()
                    .map(|r| r.checkpoints[k].1.iter().zip(&ell).map(|(&c, l)| c as f64 * l).sum())
                    .collect()
            })
            .collect();
        (samples, kappa(&w).min(1.0), records_csv(&records, w.dim()))
    } else {
        let alpha = p.f64("alpha", 1.5)?;
        let beta = p.f64("beta", 1.0)?;
        p.finish()?;
        let rc = regime_constants(BetaEnvParams::new(alpha, beta)?)?;
        let w = LatticeWeights::one_dim(alpha, beta)?;
        let pos = gather(map_replicas(replicas, |i| {
            let mut rng = replica(seed, i);
            let mut env = LatticeEnvironment::new(w.clone(), rng.random())?;
            Ok(walk_line(&mut env, last, &grid, &mut rng))
        }))?;
        let mut csv = WalkRecord::csv_header(1);
        csv.push('\n');
        for (i, xs) in pos.iter().enumerate() {
            for (t, x) in grid.iter().zip(xs) {
                let _ = writeln!(csv, "{i},{t},{x}");
            }
        }
        let samples = (0..grid.len()).map(|k| pos.iter().map(|p| p[k] as f64).collect()).collect();
        (samples, rc.growth_exponent(), csv)
    };
    let fit = exponent_from_samples(&times, &samples)?;
    let mut medians = String::from("n,median_displacement\n");
    for (t, m) in &fit.medians {
        let _ = writeln!(medians, "{t},{m}");
    }
    Ok(Report {
        measurements: vec![Measurement::new("slope", fit.slope, expected, Rule::Absolute, tolerance, Tag::Theorem)],
        artifacts: vec![Artifact::new("medians.csv", medians), Artifact::new("positions.csv", positions)],
    })
}

pub fn accelerated(p: &mut Params, seed: u64) -> Result<Report> {
    let weights = p.list("weights", &[0.45, 0.075, 0.15, 0.075])?;
    let radius = p.count("radius", 2)?;
    let samples = to_usize("samples", p.count("samples", 20_000)?)?;
    let sites = p.count("sites", 3)?;
    p.finish()?;
    ensure!(samples >= 2, "--samples must be at least 2");
    ensure!(radius <= 8, "--radius must be at most 8");
    let w = LatticeWeights::new(&weights)?;
    let d = w.dim();
    let mut env = LatticeEnvironment::new(w.clone(), seed)?;

    let mut worst_r0: f64 = 0.0;
    let side = 5i64;
    let cells = (2 * side + 1).pow(d as u32);
    for cell in 0..cells {
        let mut c = cell;
        let x: Vec<i64> = (0..d)
            .map(|_| {
                let v = c % (2 * side + 1) - side;
                c /= 2 * side + 1;
                v
            })
            .collect();
        worst_r0 = worst_r0.max((gamma_factor(&mut env, &x, 0)? - 1.0).abs());
    }

    let mut rng = replica(sub_seed(seed, 1), 0);
    let mut csv = String::from("site,r,gamma,mean_holding,standard_error\n");
    let mut worst_z: f64 = 0.0;
    for k in 0..sites as i64 {
        let site: Vec<i64> = (0..d).map(|i| k * (2 * i as i64 + 1) * if i % 2 == 0 { 1 } else { -1 }).collect();
        for r in 1..=radius as u32 {
            let mut walker = AcceleratedWalker::new(&mut env, r, &site)?;
            let gamma = walker.gamma_here()?;
            let holds: Vec<f64> = (0..samples).map(|_| walker.holding_time(&mut rng)).collect::<rwde::Result<_>>()?;
            let (m, se) = mean_and_se(&holds);
            worst_z = worst_z.max((m - 1.0 / gamma).abs() / se);
            let label: Vec<String> = site.iter().map(i64::to_string).collect();
            let _ = writeln!(csv, "{},{r},{gamma},{m},{se}", label.join(";"));
        }
    }
    Ok(Report {
        measurements: vec![
            Measurement::new("max_abs_gamma_r0_minus_one", worst_r0, 0.0, Rule::AtMost, 0.0, Tag::Trivial),
            Measurement::new("max_holding_time_z", worst_z, 3.0, Rule::AtMost, 0.0, Tag::Derived),
        ],
        artifacts: vec![Artifact::new("gamma.csv", csv)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_enumeration_matches_kappa() {
        for a in [[1.0, 1.0, 1.0, 1.0], [0.3, 0.05, 0.2, 0.1], [2.0, 1.0, 1.0, 1.0]] {
            let w = LatticeWeights::new(&a).unwrap();
            let by_traps = (0..2).map(|i| pair_exit_weight(&w, i)).fold(f64::INFINITY, f64::min);
            assert!((by_traps - kappa(&w)).abs() < 1e-12);
        }
    }
}
