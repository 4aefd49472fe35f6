//! Dense symmetric linear algebra: matrices, the Jacobi eigensolver, and norms.

mod eigh;
mod matrix;

pub use eigh::{eigh, Spectrum, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL};
pub use matrix::{Matrix, MatrixJson, SymmetricMatrix, ASYMMETRY_TOL};

use serde::Serialize;

use crate::error::Result;

/// Largest eigenvalue magnitude.
pub fn op_norm(a: &SymmetricMatrix) -> Result<f64> {
    let s = eigh(a)?;
    Ok(s.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs())))
}

/// Operator norm of a square matrix that is symmetric up to roundoff.
pub(crate) fn op_norm_of(m: &Matrix) -> Result<f64> {
    op_norm(&SymmetricMatrix::new(m.clone())?)
}

pub fn fro_norm(a: &SymmetricMatrix) -> f64 {
    a.matrix().fro_norm()
}

/// Differences between two symmetric matrices, spectrally and in norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralDistance {
    /// `max_k |λ_k(a) − λ_k(b)|`, both spectra non-increasing.
    pub max_eig_diff: f64,
    /// `‖spec↓(a) − spec↓(b)‖₂`.
    pub l2_eig_diff: f64,
    pub op_norm_diff: f64,
    pub fro_norm_diff: f64,
}

/// Eigenvalue displacement next to the norms that bound it (Weyl, Hoffman–Wielandt).
pub fn spectral_distance(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<SpectralDistance> {
    a.check_dim(b)?;
    let sa = eigh(a)?;
    let sb = eigh(b)?;
    let diffs: Vec<f64> = sa
        .eigenvalues
        .iter()
        .zip(&sb.eigenvalues)
        .map(|(x, y)| (x - y).abs())
        .collect();
    let delta = a.sub(b)?;
    Ok(SpectralDistance {
        max_eig_diff: diffs.iter().fold(0.0, |m: f64, d| m.max(*d)),
        l2_eig_diff: diffs.iter().map(|d| d * d).sum::<f64>().sqrt(),
        op_norm_diff: op_norm(&delta)?,
        fro_norm_diff: fro_norm(&delta),
    })
}

/// Non-increasing eigenvalues of a symmetric matrix.
pub fn spec_desc(a: &SymmetricMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.eigenvalues)
}
