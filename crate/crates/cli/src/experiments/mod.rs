//! The experiment registry.

mod env_laws;
mod flows;
mod lattice;
mod line;

use anyhow::Result;
use rwde::RngHandle;

use crate::config::Params;
use crate::verdict::{Measurement, Tag};

pub struct Artifact {
    pub file: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(file: &str, contents: String) -> Self {
        Self {
            file: file.to_string(),
            contents,
        }
    }
}

#[derive(Default)]
pub struct Report {
    pub measurements: Vec<Measurement>,
    pub artifacts: Vec<Artifact>,
}

/// Reads its parameters, calls [`Params::finish`], then computes.
pub type RunFn = fn(&mut Params, u64) -> Result<Report>;

pub struct Entry {
    pub name: &'static str,
    pub description: &'static str,
    /// The result the expected values come from.
    pub reference: &'static str,
    pub tags: &'static [Tag],
    pub run: RunFn,
}

pub const REGISTRY: [Entry; 15] = [
    Entry {
        name: "reversal-check",
        description: "moments and cross-site correlations of the time-reversed environment on a torus",
        reference: "time-reversal lemma: the reversed environment is Dirichlet with reversed weights",
        tags: &[Tag::Theorem],
        run: env_laws::reversal_check,
    },
    Entry {
        name: "return-law",
        description: "law of the probability to return through a given entering edge",
        reference: "Beta law of the return probability through an edge",
        tags: &[Tag::Theorem],
        run: env_laws::return_law,
    },
    Entry {
        name: "polya-equivalence",
        description: "path probabilities of the edge-reinforced walk against annealed Dirichlet moments",
        reference: "Pólya urn representation of the annealed walk",
        tags: &[Tag::Theorem],
        run: env_laws::polya_equivalence,
    },
    Entry {
        name: "transience-cylinder",
        description: "mean probability to exit a cylinder on the right",
        reference: "directional transience inequality on cylinders",
        tags: &[Tag::Theorem, Tag::Derived],
        run: env_laws::transience_cylinder,
    },
    Entry {
        name: "kappa-table",
        description: "trap parameter κ, drift d_α and the box parameter κ^Λ(r)",
        reference: "definition of κ and of the box parameter κ^Λ",
        tags: &[Tag::Trivial],
        run: lattice::kappa_table,
    },
    Entry {
        name: "trap-tails",
        description: "tail exponent of the Green function of a two-site trap",
        reference: "trap tail proposition: the Green function has tail exponent κ",
        tags: &[Tag::Theorem],
        run: lattice::trap_tails,
    },
    Entry {
        name: "speed",
        description: "asymptotic speed of the one-dimensional walk",
        reference: "Solomon speed formula for Beta environments",
        tags: &[Tag::Theorem],
        run: line::speed,
    },
    Entry {
        name: "direction",
        description: "direction of ballistic lattice walks",
        reference: "asymptotic direction d_α of ballistic walks",
        tags: &[Tag::Theorem],
        run: lattice::direction,
    },
    Entry {
        name: "clt",
        description: "Gaussian fluctuations of the one-dimensional walk when κ₁ > 2",
        reference: "limit laws of the one-dimensional walk, Gaussian regime",
        tags: &[Tag::Theorem],
        run: line::clt,
    },
    Entry {
        name: "exponent",
        description: "growth exponent of the displacement, one-dimensional or on the lattice",
        reference: "limit laws of the one-dimensional walk; log-displacement exponent κ on the lattice",
        tags: &[Tag::Theorem],
        run: lattice::exponent,
    },
    Entry {
        name: "accelerated",
        description: "holding times of the accelerated walk and the factor γ",
        reference: "accelerated walk with rate γ^ω built from exit paths of a box",
        tags: &[Tag::Trivial, Tag::Derived],
        run: lattice::accelerated,
    },
    Entry {
        name: "flows-resistance",
        description: "effective resistance of lattice balls and energy of the Thomson flow",
        reference: "transience through finite-energy flows; Thomson principle",
        tags: &[Tag::Theorem, Tag::Derived],
        run: flows::flows_resistance,
    },
    Entry {
        name: "min-cut",
        description: "minimal cut between the origin and the outside of a lattice ball",
        reference: "max-flow min-cut theorem on the lattice ball",
        tags: &[Tag::Theorem],
        run: flows::min_cut,
    },
    Entry {
        name: "onedim-laws",
        description: "law of the renewal series R and its Kesten tail constant",
        reference: "Chamayou–Letac Beta law and Kesten tail of R",
        tags: &[Tag::Theorem],
        run: line::onedim_laws,
    },
    Entry {
        name: "ldp-rate",
        description: "quenched large-deviation rate function of hitting times and the law of φ(λ)/λ",
        reference: "large deviations of hitting times; hypergeometric law of the continued fraction",
        tags: &[Tag::Theorem, Tag::Derived],
        run: line::ldp_rate,
    },
];

pub fn find(name: &str) -> Option<&'static Entry> {
    REGISTRY.iter().find(|e| e.name == name)
}

/// Seed of the `k`-th independent sub-ensemble of an experiment.
pub(crate) fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub(crate) fn replica(seed: u64, i: usize) -> RngHandle {
    RngHandle::replica(seed, i as u64)
}

pub(crate) fn gather<T>(results: Vec<rwde::Result<T>>) -> Result<Vec<T>> {
    Ok(results.into_iter().collect::<rwde::Result<Vec<T>>>()?)
}

pub(crate) fn to_usize(key: &str, v: u64) -> Result<usize> {
    usize::try_from(v).map_err(|_| anyhow::anyhow!("--{key} is too large"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_tagged() {
        let mut names: Vec<&str> = REGISTRY.iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), REGISTRY.len());
        assert!(REGISTRY.iter().all(|e| !e.tags.is_empty() && !e.reference.is_empty()));
    }
}
