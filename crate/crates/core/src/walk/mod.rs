//! Walk engines and the lattice parameter calculators.

mod accelerated;
mod exponent;
mod lattice;
mod quenched;
mod record;
mod regeneration;
mod reinforced;

pub use accelerated::{accelerated_walk, gamma_factor, AcceleratedWalker, PATH_GUARD};
pub use exponent::{displacement_exponent, exponent_from_samples, geometric_grid, ExponentFit};
pub use lattice::{
    d_alpha, kappa, kappa_lambda_box, pair_trap_green, LatticeEnvironment, LatticeWeights, SiteVector, MAX_DIM,
};
pub use quenched::{
    quenched_walk, quenched_walk_graph, walk_line, walk_line_path, GraphStop, StopRule, WalkOptions,
    DEFAULT_STEP_GUARD,
};
pub use record::{Outcome, WalkRecord};
pub use regeneration::{regeneration_from_projection, regeneration_times, RegenerationSummary};
pub use reinforced::{
    annealed_path_probability, enumerate_paths, reinforced_path_probability, reinforced_walk_graph,
    reinforced_walk_lattice,
};
