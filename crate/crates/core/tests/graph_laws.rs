use std::sync::Arc;

use rwde::graph::{
    build_ball, build_torus, divergence, invariant_measure, occupation_density, return_via_edge_probability,
    reverse_environment, sample_environment, Cycle, WeightedDigraph,
};
use rwde::quad::integrate;
use rwde::sampling::special::{beta_cdf, ln_beta};
use rwde::sampling::stats::{ks_critical, ks_statistic, mean_and_se};
use rwde::sampling::{dirichlet_joint_moment, Moment};
use rwde::RngHandle;

#[test]
fn return_edge_law_on_torus() {
    let alpha = [1.0, 0.5, 2.0, 1.5];
    let (g, layout) = build_torus(2, 4, &alpha).unwrap();
    let g = Arc::new(g);
    let x = layout.vertex(&[1, 2]);
    let in_weight = g.in_weight(x);
    let n = 4000;
    for &entry in g.in_edges(x).iter().take(2) {
        let a = g.weight(entry);
        let mut rng = RngHandle::new(31, entry as u64);
        let probs: Vec<f64> = (0..n)
            .map(|_| {
                let env = sample_environment(&g, &mut rng).unwrap();
                return_via_edge_probability(&env, x, entry).unwrap()
            })
            .collect();
        let d = ks_statistic(&probs, |p| beta_cdf(a, in_weight - a, p).unwrap()).unwrap();
        assert!(d < ks_critical(n), "entry {entry}: {d}");
    }
}

#[test]
fn ball_with_special_edge_has_zero_divergence_after_closing() {
    let g = build_ball(2, 3, &[1.0, 1.0, 1.0, 1.0], 1.0).unwrap();
    let div = g.weight_divergence();
    let boundary = g.vertex_count() - 1;
    for (v, d) in div.iter().enumerate() {
        let want = if v == boundary { 1.0 } else if v == 0 { -1.0 } else { 0.0 };
        assert!((d - want).abs() < 1e-12, "vertex {v}: {d}");
    }
    // a unit flow from ∂ back to 0 on the special edge cancels it
    let special = g.find_edge(boundary, 0).unwrap();
    let mut theta = vec![0.0; g.edge_count()];
    theta[special] = 1.0;
    let flow_div = divergence(&g, &theta);
    assert!((flow_div[boundary] - 1.0).abs() < 1e-15 && (flow_div[0] + 1.0).abs() < 1e-15);
}

#[test]
fn cycle_weights_survive_reversal_and_moments_match() {
    let (g, layout) = build_torus(2, 3, &[1.0, 2.0, 1.0, 0.5]).unwrap();
    let g = Arc::new(g);
    // the square 0 → e1 → e1+e2 → e2 → 0
    let a = layout.vertex(&[0, 0]);
    let b = layout.vertex(&[1, 0]);
    let c = layout.vertex(&[1, 1]);
    let d = layout.vertex(&[0, 1]);
    let edges = vec![layout.edge(a, 0), layout.edge(b, 1), layout.edge(c, 2), layout.edge(d, 3)];
    let cycle = Cycle::new(&g, edges.clone()).unwrap();
    let mut rng = RngHandle::new(32, 0);
    let n = 200_000;
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        let env = sample_environment(&g, &mut rng).unwrap();
        let w = cycle.weight(&env);
        if k < 200 {
            let rev = reverse_environment(&env).unwrap();
            let back = cycle.reversed().weight(&rev);
            assert!((w - back).abs() <= 1e-12 * w.max(1e-300));
        }
        weights.push(w);
    }
    // four distinct sites: the cycle weight is a product of independent marginals
    let want: f64 = edges
        .iter()
        .map(|&e| {
            let site: Vec<f64> = g.out_edges(g.tail(e)).iter().map(|&f| g.weight(f)).collect();
            let exps: Vec<f64> = g.out_edges(g.tail(e)).iter().map(|&f| if f == e { 1.0 } else { 0.0 }).collect();
            match dirichlet_joint_moment(&site, &exps).unwrap() {
                Moment::Finite(m) => m,
                Moment::Infinite => f64::INFINITY,
            }
        })
        .product();
    let (m, se) = mean_and_se(&weights);
    assert!((m - want).abs() < 4.0 * se, "{m} ± {se} vs {want}");
}

#[test]
fn reversal_twice_is_identity_on_random_graphs() {
    let g = Arc::new(
        WeightedDigraph::new(
            5,
            &[
                (0, 1, 0.7),
                (1, 2, 1.3),
                (2, 0, 0.4),
                (2, 3, 2.0),
                (3, 4, 0.9),
                (4, 2, 1.1),
                (4, 0, 0.6),
                (0, 3, 0.8),
                (3, 3, 0.5),
            ],
        )
        .unwrap(),
    );
    let mut rng = RngHandle::new(33, 0);
    for _ in 0..100 {
        let env = sample_environment(&g, &mut rng).unwrap();
        let back = reverse_environment(&reverse_environment(&env).unwrap()).unwrap();
        for (p, q) in env.probs().iter().zip(back.probs()) {
            assert!((p - q).abs() < 1e-10);
        }
        let pi = invariant_measure(&env).unwrap();
        let pi_rev = invariant_measure(&reverse_environment(&env).unwrap()).unwrap();
        for (a, b) in pi.iter().zip(&pi_rev) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

/// Two vertices, edges e1, e2 = (a, b) and e3 = (b, a), root edge e2. The
/// occupation coordinate `t = z_{e1}` equals `ω_{e1}/ω_{e2}`, a Beta-prime
/// variable.
#[test]
fn occupation_density_matches_beta_prime() {
    let (a1, a2) = (2.0, 3.0);
    let g = WeightedDigraph::new(2, &[(0, 1, a1), (0, 1, a2), (1, 0, 1.5)]).unwrap();
    let density = |t: f64| occupation_density(&g, &[t, 1.0, 1.0 + t], 1, 0).unwrap();
    let lb = ln_beta(a1, a2).unwrap();
    for t in [0.01f64, 0.3, 1.0, 2.5, 40.0] {
        let want = ((a1 - 1.0) * t.ln() - (a1 + a2) * t.ln_1p() - lb).exp();
        assert!((density(t) / want - 1.0).abs() < 1e-10, "t = {t}");
        // the tree factor does not depend on the root
        let other = occupation_density(&g, &[t, 1.0, 1.0 + t], 1, 1).unwrap();
        assert!((other / density(t) - 1.0).abs() < 1e-12);
    }
    // mean by quadrature on t = s/(1-s)
    let mean = integrate(
        |s: f64| {
            let t = s / (1.0 - s);
            t * density(t) / ((1.0 - s) * (1.0 - s))
        },
        0.0,
        1.0,
        1e-12,
        1e-10,
    )
    .unwrap();
    let g = Arc::new(g);
    let mut rng = RngHandle::new(34, 0);
    let ts: Vec<f64> = (0..100_000)
        .map(|_| {
            let env = sample_environment(&g, &mut rng).unwrap();
            let pi = invariant_measure(&env).unwrap();
            (pi[0] * env.prob(0)) / (pi[0] * env.prob(1))
        })
        .collect();
    let (m, se) = mean_and_se(&ts);
    assert!((m - mean).abs() < 3.0 * se, "{m} ± {se} vs {mean}");
}

#[test]
fn occupation_density_is_root_independent() {
    // Eulerian z on a 4-vertex graph: two cycles sharing vertex 0
    let g = WeightedDigraph::new(
        4,
        &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 3, 0.5), (3, 0, 0.5), (1, 3, 0.7), (3, 1, 0.7)],
    )
    .unwrap();
    let z = [1.0, 1.2, 1.2, 0.6, 0.4, 0.3, 0.5];
    let div = divergence(&g, &z);
    assert!(div.iter().all(|d| d.abs() < 1e-12), "{div:?}");
    let base = occupation_density(&g, &z, 0, 0).unwrap();
    for x0 in 1..4 {
        let d = occupation_density(&g, &z, 0, x0).unwrap();
        assert!((d / base - 1.0).abs() < 1e-12);
    }
}
