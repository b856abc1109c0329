use std::fmt::Write as _;

/// How a walk ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// The stopping rule fired.
    Stopped,
    /// The fixed horizon was reached.
    Horizon,
    /// The step guard tripped before the stopping rule fired.
    Timeout,
}

/// Summary of one trajectory. Positions are lattice points (or a single
/// coordinate holding the vertex index for walks on finite graphs).
#[derive(Debug, Clone, PartialEq)]
pub struct WalkRecord {
    pub dim: usize,
    /// `(time, position)` pairs in increasing time order.
    pub checkpoints: Vec<(f64, Vec<i64>)>,
    /// Named events such as `"hit"`, `"exit"` or `"return"` with their times.
    pub events: Vec<(String, f64)>,
    pub final_time: f64,
    pub final_position: Vec<i64>,
    /// Full path, flattened `dim` coordinates per step; kept only on request.
    pub path: Option<Vec<i64>>,
    pub outcome: Outcome,
}

impl WalkRecord {
    pub fn event(&self, name: &str) -> Option<f64> {
        self.events.iter().find(|(n, _)| n == name).map(|&(_, t)| t)
    }

    /// Number of positions stored in the path.
    pub fn path_len(&self) -> usize {
        self.path.as_ref().map_or(0, |p| p.len() / self.dim)
    }

    pub fn path_point(&self, n: usize) -> Option<&[i64]> {
        self.path.as_ref().and_then(|p| p.get(n * self.dim..(n + 1) * self.dim))
    }

    /// Projection `X_n · ℓ` of every stored path point.
    pub fn projected_path(&self, direction: &[f64]) -> Option<Vec<f64>> {
        let p = self.path.as_ref()?;
        Some(
            p.chunks(self.dim)
                .map(|x| x.iter().zip(direction).map(|(&c, &l)| c as f64 * l).sum())
                .collect(),
        )
    }

    /// CSV rows `replica,time,x_1,...,x_d` for the checkpoints.
    pub fn csv_rows(&self, replica: usize) -> String {
        let mut s = String::new();
        for (t, x) in &self.checkpoints {
            let _ = write!(s, "{replica},{t}");
            for c in x {
                let _ = write!(s, ",{c}");
            }
            s.push('\n');
        }
        s
    }

    /// CSV header matching [`WalkRecord::csv_rows`].
    pub fn csv_header(dim: usize) -> String {
        let mut s = String::from("replica,time");
        for i in 1..=dim {
            let _ = write!(s, ",x_{i}");
        }
        s
    }
}
