//! Mercer kernels on `[0, 1]` with known spectra, their Gram matrices, the Nyström
//! extension, empirical-measure functionals and Bernstein concentration constants.

mod bernstein;
mod empirical;
mod gram;
mod model;
mod nystrom;
mod quadrature;
mod sample;

pub use bernstein::{
    bernstein_constants, bernstein_radius, bernstein_tail, clustered_eigen_bound,
    clustered_failure_budget, clustered_level, min_sample_size, separated_eigen_bound,
    separated_failure_budget, separated_level, xi_bound, xi_from_radius, xi_value, BernsteinConstants,
    KAPPA_GRID,
};
pub use empirical::{
    bilinear_from_gram, bilinear_projection_dev, empirical_dev, empirical_operator_coeffs,
    rkhs_inner, rkhs_norm, sample_function, upsilon_from_dev, upsilon_hat, BilinearDev,
};
pub use gram::{gram, FeatureGram, GramSystem};
pub use model::{
    KernelKind, KernelModel, KernelSpec, QuadratureCheck, DEFAULT_BROWNIAN_RANK, MAX_FINITE_RANK,
};
pub use nystrom::{nystrom, NystromFunction};
pub use quadrature::{unit_quadrature, UnitQuadrature, QUADRATURE_NODES};
pub use sample::{trial_rng, uniform_points, SampleSet};

/// Gram eigenvalues at or below this are treated as zero.
pub const EPS_EIG: f64 = 1e-10;
