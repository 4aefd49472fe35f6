//! Spectral perturbation expansions for symmetric matrices and kernel Gram matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: symmetric matrices, a Jacobi eigensolver, norms.
//! * [`spectral`]: index sets with their clusters and gaps, compression operators,
//!   contour-integral cross-checks.
//! * [`perturbation`]: first-order expansions of eigenprojections and eigenvalues with
//!   explicit remainder bounds.
//! * [`kernel`]: Mercer kernels with known spectra, Gram matrices, Nyström extension,
//!   Bernstein concentration constants.
//! * [`montecarlo`]: seeded parallel studies of coverage and weak limits.
//! * [`cli`]: the batch front end behind the `spectra` binary.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod kernel;
pub mod linalg;
pub mod montecarlo;
pub mod perturbation;
pub mod spectral;

pub use error::{Error, Result};
