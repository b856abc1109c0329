//! Exact one-dimensional computations for the Beta(α, β) walk on `Z`.
//!
//! `ω_x` is the probability of a step from `x` to `x+1` and `ρ_x = (1−ω_x)/ω_x`.

mod hypergeom;
mod ldp;
mod regimes;
mod renewal;

pub use hypergeom::{h1_cdf, h1_density, h2_moment, hyp2f1, H1};
pub use ldp::{
    log_mgf, phi_adaptive, phi_continued_fraction, rate_function, sample_z_fixed_point, RateFunctionTable,
    MAX_DEPTH, PHI_AGREEMENT,
};
pub use regimes::{regime_constants, Regime, RegimeConstants};
pub use renewal::{
    kesten_constant, quenched_identities, sample_r, solomon_speed, BetaEnvParams, EnvSlab, QuenchedIdentities,
};
