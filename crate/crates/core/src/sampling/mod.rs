//! Exact samplers, Pólya urns, Dirichlet moments, special functions and the
//! goodness-of-fit statistics used by the Monte Carlo checks.

mod gamma;
mod moments;
pub mod special;
pub mod stats;
mod urn;

pub use gamma::{sample_beta, Dirichlet, sample_dirichlet, sample_gamma, sample_log_gamma, SimplexPoint};
pub use moments::{dirichlet_joint_moment, Moment};
pub use urn::{polya_draw, polya_path_probability, UrnState};
