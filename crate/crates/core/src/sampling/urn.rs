use rand::Rng;

use crate::error::{ensure, Result};

/// Pólya urn with real-valued initial weights; each draw adds one ball of
/// the drawn color.
#[derive(Debug, Clone, PartialEq)]
pub struct UrnState {
    initial: Vec<f64>,
    weights: Vec<f64>,
    draw_count: u64,
}

impl UrnState {
    pub fn new(initial: &[f64]) -> Result<Self> {
        ensure!(!initial.is_empty(), ParameterDomain, "urn needs at least one color");
        ensure!(
            initial.iter().all(|&w| w > 0.0 && w.is_finite()),
            ParameterDomain,
            "urn weights must be positive"
        );
        Ok(Self {
            initial: initial.to_vec(),
            weights: initial.to_vec(),
            draw_count: 0,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn draw_count(&self) -> u64 {
        self.draw_count
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn proportions(&self) -> Vec<f64> {
        let t = self.total();
        self.weights.iter().map(|w| w / t).collect()
    }

    /// Draw a color and reinforce it.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.total();
        let mut acc = 0.0;
        let mut chosen = self.weights.len() - 1;
        for (i, &w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                chosen = i;
                break;
            }
        }
        self.weights[chosen] += 1.0;
        self.draw_count += 1;
        chosen
    }
}

pub fn polya_draw<R: Rng + ?Sized>(state: &UrnState, rng: &mut R) -> (usize, UrnState) {
    let mut next = state.clone();
    let color = next.draw(rng);
    (color, next)
}

/// Probability that an urn started at `initial` produces the color sequence
/// `colors`: `∏_i α_i(α_i+1)⋯(α_i+n_i−1) / ∏_k (Σα + k − 1)`.
pub fn polya_path_probability(initial: &[f64], colors: &[usize]) -> Result<f64> {
    ensure!(!initial.is_empty(), ParameterDomain, "urn needs at least one color");
    ensure!(initial.iter().all(|&w| w > 0.0), ParameterDomain, "urn weights must be positive");
    ensure!(colors.iter().all(|&c| c < initial.len()), Usage, "color index out of range");
    let mut weights = initial.to_vec();
    let mut total: f64 = weights.iter().sum();
    let mut p = 1.0;
    for &c in colors {
        p *= weights[c] / total;
        weights[c] += 1.0;
        total += 1.0;
    }
    Ok(p)
}
