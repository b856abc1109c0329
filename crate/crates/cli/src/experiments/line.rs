//! One-dimensional experiments.

use std::fmt::Write as _;

use anyhow::{bail, ensure, Result};
use rand::Rng;
use rwde::onedim::{
    kesten_constant, phi_adaptive, regime_constants, sample_r, sample_z_fixed_point, solomon_speed, BetaEnvParams,
    RateFunctionTable, Regime, RegimeConstants, H1,
};
use rwde::par::map_replicas;
use rwde::sampling::special::beta_cdf;
use rwde::sampling::stats::{ks_critical, ks_statistic, mean_and_se, sample_sd};
use rwde::walk::{walk_line, LatticeEnvironment, LatticeWeights};

use super::{gather, replica, sub_seed, to_usize, Artifact, Report};
use crate::config::Params;
use crate::verdict::{Measurement, Rule, Tag};

fn final_positions(alpha: f64, beta: f64, seed: u64, replicas: usize, steps: u64) -> Result<Vec<i64>> {
    let w = LatticeWeights::one_dim(alpha, beta)?;
    gather(map_replicas(replicas, |i| {
        let mut rng = replica(seed, i);
        let mut env = LatticeEnvironment::new(w.clone(), rng.random())?;
        Ok(walk_line(&mut env, steps, &[steps], &mut rng)[0])
    }))
}

pub fn speed(p: &mut Params, seed: u64) -> Result<Report> {
    let alpha = p.f64("alpha", 3.0)?;
    let beta = p.f64("beta", 1.0)?;
    let steps = p.count("steps", 1_000_000)?;
    let replicas = to_usize("replicas", p.count("replicas", 100)?)?;
    let tolerance = p.f64("tolerance", 0.02)?;
    p.finish()?;
    ensure!(steps >= 1 && replicas >= 1, "--steps and --replicas must be positive");
    let v = solomon_speed(BetaEnvParams::new(alpha, beta)?);
    let pos = final_positions(alpha, beta, seed, replicas, steps)?;
    let speeds: Vec<f64> = pos.iter().map(|&x| x as f64 / steps as f64).collect();
    let (m, _) = mean_and_se(&speeds);
    let mut csv = String::from("replica,time,x_1\n");
    for (i, x) in pos.iter().enumerate() {
        let _ = writeln!(csv, "{i},{steps},{x}");
    }
    Ok(Report {
        measurements: vec![Measurement::new("mean_speed", m, v, Rule::Absolute, tolerance, Tag::Theorem)],
        artifacts: vec![Artifact::new("positions.csv", csv)],
    })
}

pub fn clt(p: &mut Params, seed: u64) -> Result<Report> {
    let alpha = p.f64("alpha", 4.0)?;
    let beta = p.f64("beta", 1.0)?;
    let steps = p.count("steps", 100_000)?;
    let replicas = to_usize("replicas", p.count("replicas", 10_000)?)?;
    let tolerance = p.f64("tolerance", 0.1)?;
    p.finish()?;
    ensure!(steps >= 1 && replicas >= 2, "need --steps ≥ 1 and --replicas ≥ 2");
    let rc = regime_constants(BetaEnvParams::new(alpha, beta)?)?;
    let Some(scale) = rc.scale.filter(|_| rc.regime == Regime::Gaussian) else {
        bail!("(α, β) = ({alpha}, {beta}) is in the {} regime; the Gaussian limit needs κ₁ > 2", rc.regime);
    };
    let pos = final_positions(alpha, beta, seed, replicas, steps)?;
    let n = steps as f64;
    let scaled: Vec<f64> = pos.iter().map(|&x| (x as f64 - rc.speed * n) / n.sqrt()).collect();
    let mut csv = String::from("replica,scaled\n");
    for (i, s) in scaled.iter().enumerate() {
        let _ = writeln!(csv, "{i},{s}");
    }
    Ok(Report {
        measurements: vec![Measurement::new(
            "sd_scaled_displacement",
            sample_sd(&scaled),
            scale,
            Rule::Relative,
            tolerance,
            Tag::Theorem,
        )],
        artifacts: vec![Artifact::new("scaled.csv", csv)],
    })
}

pub fn onedim_laws(p: &mut Params, seed: u64) -> Result<Report> {
    let alpha = p.f64("alpha", 3.0)?;
    let beta = p.f64("beta", 1.0)?;
    let samples = to_usize("samples", p.count("samples", 100_000)?)?;
    let tail_alpha = p.f64("tail-alpha", 1.5)?;
    let tail_beta = p.f64("tail-beta", 1.0)?;
    let tail_samples = to_usize("tail-samples", p.count("tail-samples", 10_000_000)?)?;
    let t = p.f64("t", 1e3)?;
    let tolerance = p.f64("tolerance", 0.25)?;
    p.finish()?;
    ensure!(samples >= 1 && tail_samples >= 1, "sample counts must be positive");
    ensure!(t > 1.0, "--t must exceed 1");
    let law = BetaEnvParams::new(alpha, beta)?;
    let tail = BetaEnvParams::new(tail_alpha, tail_beta)?;

    // 1/R ~ Beta(α − β, β)
    let inv = gather(map_replicas(samples, |i| {
        let mut rng = replica(seed, i);
        Ok(1.0 / sample_r(law, &mut rng, 1e-12)?)
    }))?;
    let d = ks_statistic(&inv, |x| beta_cdf(alpha - beta, beta, x).unwrap_or(f64::NAN))?;

    let chunks = 1000.min(tail_samples);
    let tail_seed = sub_seed(seed, 1);
    let hits: usize = gather(map_replicas(chunks, |c| {
        let mut rng = replica(tail_seed, c);
        let len = tail_samples / chunks + usize::from(c < tail_samples % chunks);
        let mut hits = 0usize;
        for _ in 0..len {
            if sample_r(tail, &mut rng, 1e-10)? > t {
                hits += 1;
            }
        }
        Ok(hits)
    }))?
    .into_iter()
    .sum();
    let kappa1 = tail.kappa1();
    let ratio = hits as f64 / tail_samples as f64 * t.powf(kappa1) / kesten_constant(tail)?;

    let mut regimes = format!("{}\n", RegimeConstants::csv_header());
    for params in [law, tail] {
        let _ = writeln!(regimes, "{}", regime_constants(params)?.csv_row());
    }
    let mut inv_csv = String::from("replica,inverse_r\n");
    for (i, x) in inv.iter().enumerate() {
        let _ = writeln!(inv_csv, "{i},{x}");
    }
    Ok(Report {
        measurements: vec![
            Measurement::new("ks_inverse_r", d, ks_critical(samples), Rule::AtMost, 0.0, Tag::Theorem),
            Measurement::new("tail_ratio_to_kesten_constant", ratio, 1.0, Rule::Absolute, tolerance, Tag::Theorem),
        ],
        artifacts: vec![Artifact::new("inverse_r.csv", inv_csv), Artifact::new("regimes.csv", regimes)],
    })
}

pub fn ldp_rate(p: &mut Params, seed: u64) -> Result<Report> {
    let alpha = p.f64("alpha", 3.0)?;
    let beta = p.f64("beta", 1.0)?;
    let grid = p.grid("t-grid", (1.0, 20.0, 100))?;
    let lambda = p.f64("lambda", 0.5)?;
    let samples = to_usize("samples", p.count("samples", 100_000)?)?;
    let iterations = to_usize("iterations", p.count("iterations", 100)?)?;
    p.finish()?;
    ensure!(grid[0] >= 1.0, "hitting-time rates live on t ≥ 1");
    ensure!(lambda > 0.0 && lambda < 1.0, "--lambda must lie in (0, 1)");
    let params = BetaEnvParams::new(alpha, beta)?;
    let table = RateFunctionTable::compute(params, &grid)?;
    let min_rate = table.rate.iter().copied().fold(f64::INFINITY, f64::min);
    let mut measurements = vec![
        Measurement::new("min_rate", min_rate, 0.0, Rule::AtLeast, 0.0, Tag::Trivial),
        Measurement::new("min_second_difference", table.min_second_difference(), 0.0, Rule::AtLeast, 1e-8, Tag::Theorem),
    ];
    if let Some(i_v) = table.rate_at_inverse_speed()? {
        measurements.push(Measurement::new("rate_at_inverse_speed", i_v, 0.0, Rule::AtMost, 1e-3, Tag::Derived));
    }
    if samples > 0 {
        let h = H1::new(alpha, beta, lambda * lambda)?;
        let cdf = |u: f64| h.cdf(u).unwrap_or(f64::NAN);
        let cf = gather(map_replicas(samples, |i| {
            let mut rng = replica(seed, i);
            Ok(phi_adaptive(params, lambda, &mut rng)? / lambda)
        }))?;
        let fp_seed = sub_seed(seed, 1);
        let fp = gather(map_replicas(samples, |i| {
            let mut rng = replica(fp_seed, i);
            sample_z_fixed_point(params, lambda, iterations, &mut rng)
        }))?;
        let crit = ks_critical(samples);
        measurements.push(Measurement::new(
            "ks_continued_fraction",
            ks_statistic(&cf, cdf)?,
            crit,
            Rule::AtMost,
            0.0,
            Tag::Theorem,
        ));
        measurements.push(Measurement::new("ks_fixed_point", ks_statistic(&fp, cdf)?, crit, Rule::AtMost, 0.0, Tag::Theorem));
    }
    Ok(Report {
        measurements,
        artifacts: vec![Artifact::new("rate.csv", table.to_csv())],
    })
}
