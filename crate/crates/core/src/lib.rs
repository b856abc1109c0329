//! Random walks in Dirichlet environment.
//!
//! The crate is organised around five layers:
//!
//! * [`sampling`]: exact Gamma/Beta/Dirichlet samplers, Pólya urns, closed-form
//!   Dirichlet moments, special functions and the KS / Hill statistics used by
//!   every Monte Carlo check.
//! * [`graph`]: finite weighted digraphs, environments, invariant measures,
//!   time reversal, spanning-tree minors and the absorption / Green-function solves.
//! * [`walk`]: quenched, reinforced and accelerated walk engines on finite graphs
//!   and on lazily sampled environments of `Z^d`, with regeneration-time extraction.
//! * [`flows`]: effective resistance, Thomson-optimal unit flows and max-flow/min-cut.
//! * [`onedim`]: exact one-dimensional laws: renewal series, scaling constants,
//!   hypergeometric densities, the continued fraction for `E[λ^{H_1}]` and the
//!   large-deviation rate function.
//!
//! Every randomized routine takes an explicit [`RngHandle`]. Replica ensembles go
//! through [`par::map_replicas`], which is data-parallel with the `parallel`
//! feature and sequential without it; results are identical either way.

pub mod error;
pub mod flows;
pub mod graph;
pub mod linalg;
pub mod onedim;
pub mod par;
pub mod quad;
pub mod rng;
pub mod sampling;
pub mod walk;

pub use error::{Error, Result};
pub use rng::RngHandle;
