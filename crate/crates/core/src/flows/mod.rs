//! Electrical flows and max-flow/min-cut.
//!
//! The min-cut computed here uses the plain capacities `α_e`. The refinement
//! that raises the cut at the origin from `Σα_i` to `κ` (injecting the unit
//! mass of `Σ_i ω(0, e_i)`) has no algorithmic description and is not
//! implemented.

mod electrical;
mod maxflow;
mod network;

pub use electrical::{averaged_flow, effective_resistance, thomson_unit_flow, FlowAssignment};
pub use maxflow::{max_flow_min_cut, CutSet, MaxFlow};
pub use network::UndirectedNetwork;
