//! Certified bounds for spectral radii in `l1(G)` and norms in the reduced
//! group C*-algebra.

mod backend;
mod characters;
mod driver;
mod estimate;
mod fourier;
mod radius;
mod sandwich;
mod semigroup;
mod verdict;

pub use backend::RadialFree;
pub use estimate::{
    EstimatorOptions, SpectralEstimate, DEFAULT_GRID, DEFAULT_N_MAX, DEFAULT_PAIR_BUDGET, DEFAULT_SUPPORT_CAP,
    DEFAULT_TOL, DEFAULT_TRUNCATION,
};
pub use fourier::{fourier_opnorm_cyclic, fourier_opnorm_lattice, MAX_GRID_POINTS};
pub use radius::{l1_spectral_radius, l1_spectral_radius_with, reduced_norm_trace, reduced_norm_trace_with};
pub use sandwich::{subexp_sandwich_radius, subexp_sandwich_radius_with, SandwichReport};
pub use semigroup::{free_semigroup_l1_probe, support_generates_free_semigroup, PROBE_MAX_POWER};
pub use verdict::{
    kesten_check, kesten_check_with, opnorm_estimate, sigma1_verdict, sigma1_verdict_with, KestenReport, Sigma1Verdict,
    Verdict, KESTEN_LATTICE_GRID,
};
