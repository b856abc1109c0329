//! Finite weighted digraphs and environments on them.

mod builders;
mod digraph;
mod env;
mod solve;
mod trees;

pub use builders::{ball_points, build_ball, build_cylinder, build_segment, build_torus, Cylinder, TorusLayout};
pub use digraph::{divergence, parse_edge_list, WeightedDigraph};
pub use env::{
    invariant_measure, reverse_environment, sample_environment, Cycle, Environment, EnvironmentSampler,
};
pub use solve::{absorption_probability, green_function_finite, return_via_edge_probability};
pub use trees::{matrix_tree_minor, occupation_density};
