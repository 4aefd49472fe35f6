//! Index sets, clusters and gaps, and the spectral calculus restricted to an index set.

mod compress;
mod contour;
mod holo;
mod index_set;

pub use compress::{
    compress, eigenprojection, grad_compress, perturbation_coords, GradCompress,
};
pub(crate) use compress::{grad_weights, to_original};
pub use contour::{
    cauchy_integral, cauchy_residue, contour_compress, contour_grad_compress,
    DEFAULT_CONTOUR_NODES, MIN_CAUCHY_NODES, MIN_CONTOUR_NODES,
};
pub use holo::HoloFunction;
pub use index_set::{build_index_set, default_cluster_tol, IndexSetInfo, CLUSTER_REL_TOL};
