//! Electrical and combinatorial flows on lattice balls.

use std::fmt::Write as _;

use anyhow::{ensure, Result};
use rwde::flows::{effective_resistance, max_flow_min_cut, thomson_unit_flow, UndirectedNetwork};
use rwde::graph::build_ball;
use rwde::sampling::stats::linear_fit;

use super::{to_usize, Artifact, Report};
use crate::config::Params;
use crate::verdict::{Measurement, Rule, Tag};

pub fn flows_resistance(p: &mut Params, _seed: u64) -> Result<Report> {
    let d = to_usize("dim", p.count("dim", 2)?)?;
    let default_sizes: &[u64] = match d {
        1 => &[4, 8, 16, 32],
        2 => &[8, 16, 32, 64, 128],
        _ => &[4, 8, 12],
    };
    let sizes = p.counts("sizes", default_sizes)?;
    p.finish()?;
    ensure!((1..=4).contains(&d), "--dim must lie in 1..=4");
    ensure!(sizes.len() >= 2, "--sizes needs at least two radii");
    ensure!(sizes.windows(2).all(|w| w[0] < w[1]) && sizes[0] >= 1, "--sizes must be increasing and positive");

    let mut resistance = String::from("N,R_N\n");
    let mut energies = String::from("N,flow_energy\n");
    let mut flow_csv = String::new();
    let mut worst_gap: f64 = 0.0;
    let mut r = Vec::new();
    let mut e = Vec::new();
    for (k, &n) in sizes.iter().enumerate() {
        let net = UndirectedNetwork::lattice_ball(d, to_usize("sizes", n)?)?;
        let sink = net.vertex_count() - 1;
        let rn = effective_resistance(&net, 0, &[sink])?;
        let flow = thomson_unit_flow(&net, 0, &[sink])?;
        let en = flow.energy();
        worst_gap = worst_gap.max((en - rn).abs());
        let _ = writeln!(resistance, "{n},{rn}");
        let _ = writeln!(energies, "{n},{en}");
        if k == 0 {
            flow_csv = flow.to_csv();
        }
        r.push(rn);
        e.push(en);
    }
    let mut measurements = vec![Measurement::new("max_abs_energy_minus_resistance", worst_gap, 0.0, Rule::AtMost, 1e-8, Tag::Theorem)];
    match d {
        1 => {
            // two chains of N + 1 unit resistors in parallel
            let dev = sizes.iter().zip(&r).map(|(&n, rn)| (rn - (n as f64 + 1.0) / 2.0).abs()).fold(0.0, f64::max);
            measurements.push(Measurement::new("max_abs_deviation_from_series_formula", dev, 0.0, Rule::AtMost, 1e-9, Tag::Trivial));
        }
        2 => {
            let ln_n: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
            let (slope, _, r_sq) = linear_fit(&ln_n, &r);
            measurements.push(Measurement::new("log_fit_r_squared", r_sq, 0.99, Rule::AtLeast, 0.0, Tag::Theorem));
            measurements.push(Measurement::new(
                "log_fit_slope",
                slope,
                1.0 / (2.0 * std::f64::consts::PI),
                Rule::Absolute,
                0.02,
                Tag::Derived,
            ));
        }
        _ => {
            let last = e.len() - 1;
            let monotone = e.windows(2).all(|w| w[0] <= w[1] + 1e-12);
            measurements.push(Measurement::new("energy_nondecreasing", f64::from(u8::from(monotone)), 1.0, Rule::AtLeast, 0.0, Tag::Trivial));
            measurements.push(Measurement::new(
                "last_relative_energy_increase",
                e[last] / e[last - 1] - 1.0,
                0.05,
                Rule::AtMost,
                0.0,
                Tag::Theorem,
            ));
        }
    }
    Ok(Report {
        measurements,
        artifacts: vec![
            Artifact::new("resistance.csv", resistance),
            Artifact::new("energy.csv", energies),
            Artifact::new("flow.csv", flow_csv),
        ],
    })
}

pub fn min_cut(p: &mut Params, _seed: u64) -> Result<Report> {
    let d = to_usize("dim", p.count("dim", 2)?)?;
    let radius = to_usize("radius", p.count("radius", 6)?)?;
    let capacity = p.f64("capacity", 1.0)?;
    p.finish()?;
    ensure!((1..=4).contains(&d), "--dim must lie in 1..=4");
    ensure!(capacity > 0.0, "--capacity must be positive");
    let ball = build_ball(d, radius, &vec![capacity; 2 * d], 2.0 * d as f64 * capacity)?;
    let edges: Vec<(usize, usize)> = ball.edges().map(|(t, h, _)| (t, h)).collect();
    let sink = ball.vertex_count() - 1;
    let cut = max_flow_min_cut(ball.vertex_count(), &edges, ball.weights(), 0, sink)?;
    let mut csv = String::from("tail,head,capacity\n");
    for &k in &cut.cut.edges {
        let _ = writeln!(csv, "{},{},{}", edges[k].0, edges[k].1, ball.weight(k));
    }
    Ok(Report {
        measurements: vec![Measurement::new(
            "min_cut_value",
            cut.value,
            2.0 * d as f64 * capacity,
            Rule::Absolute,
            1e-9 * capacity,
            Tag::Theorem,
        )],
        artifacts: vec![Artifact::new("cut.csv", csv)],
    })
}
