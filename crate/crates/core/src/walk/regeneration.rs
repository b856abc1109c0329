//! Regeneration (renewal) times in a direction `ℓ`.

use std::fmt::Write as _;

use crate::error::{ensure, Result};
use crate::walk::record::WalkRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct RegenerationSummary {
    pub direction: Vec<f64>,
    /// `τ_1 < τ_2 < …` confirmed within the observed path.
    pub times: Vec<u64>,
    /// `(X_{τ_k} − X_{τ_{k−1}})·ℓ` with `τ_0 = 0`.
    pub displacements: Vec<f64>,
    /// Candidates dropped because the path ends too early to confirm them.
    pub censored: usize,
}

impl RegenerationSummary {
    /// `τ_{k+1} − τ_k` for `k ≥ 1`.
    pub fn increments(&self) -> Vec<u64> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// CSV rows `replica,k,tau_k,displacement`.
    pub fn csv_rows(&self, replica: usize) -> String {
        let mut s = String::new();
        for (k, (t, d)) in self.times.iter().zip(&self.displacements).enumerate() {
            let _ = writeln!(s, "{replica},{},{t},{d}", k + 1);
        }
        s
    }
}

/// Times `n ≥ 1` with `X_i·ℓ < X_n·ℓ ≤ X_j·ℓ` for all `i < n ≤ j` along the
/// observed projection. The last such time is not confirmed by the finite
/// path and is dropped.
pub fn regeneration_from_projection(proj: &[f64]) -> (Vec<u64>, usize) {
    let n = proj.len();
    if n < 2 {
        return (Vec::new(), 0);
    }
    let mut suffix_min = proj.to_vec();
    for i in (0..n - 1).rev() {
        suffix_min[i] = suffix_min[i].min(suffix_min[i + 1]);
    }
    let mut times = Vec::new();
    let mut running_max = proj[0];
    for i in 1..n {
        if proj[i] > running_max && proj[i] <= suffix_min[i] {
            times.push(i as u64);
        }
        running_max = running_max.max(proj[i]);
    }
    let censored = usize::from(times.pop().is_some());
    (times, censored)
}

pub fn regeneration_times(record: &WalkRecord, direction: &[f64]) -> Result<RegenerationSummary> {
    ensure!(direction.len() == record.dim, Usage, "direction has the wrong dimension");
    let proj = record
        .projected_path(direction)
        .ok_or_else(|| crate::Error::Usage("regeneration times need the full path".into()))?;
    let (times, censored) = regeneration_from_projection(&proj);
    let mut displacements = Vec::with_capacity(times.len());
    let mut prev = proj[0];
    for &t in &times {
        displacements.push(proj[t as usize] - prev);
        prev = proj[t as usize];
    }
    Ok(RegenerationSummary {
        direction: direction.to_vec(),
        times,
        displacements,
        censored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::record::Outcome;

    fn record(path: Vec<i64>) -> WalkRecord {
        WalkRecord {
            dim: 1,
            checkpoints: Vec::new(),
            events: Vec::new(),
            final_time: (path.len() - 1) as f64,
            final_position: vec![*path.last().unwrap()],
            path: Some(path),
            outcome: Outcome::Horizon,
        }
    }

    #[test]
    fn straight_path_regenerates_every_step() {
        let s = regeneration_times(&record((0..=10).collect()), &[1.0]).unwrap();
        assert_eq!(s.times, (1..10).collect::<Vec<u64>>());
        assert_eq!(s.censored, 1);
        assert!(s.displacements.iter().all(|&d| d == 1.0));
    }

    #[test]
    fn backtracking_below_start_delays_regeneration() {
        // 0 1 0 -1 0 1 2 3: the first visit to 1 is undercut later
        let s = regeneration_times(&record(vec![0, 1, 0, -1, 0, 1, 2, 3]), &[1.0]).unwrap();
        assert_eq!(s.times, vec![6]);
        assert_eq!(s.displacements, vec![2.0]);
        assert!(s.csv_rows(3).starts_with("3,1,6,2"));
    }

    #[test]
    fn no_regeneration_is_valid() {
        let s = regeneration_times(&record(vec![0, -1, -2, -1]), &[1.0]).unwrap();
        assert!(s.times.is_empty());
        assert_eq!(s.censored, 0);
    }
}
