use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, op_norm, op_norm_of, Matrix, Spectrum, SymmetricMatrix};
use crate::spectral::IndexSetInfo;

/// Inner products `⟨ψ_k, ψ̂_ℓ⟩` over `k, ℓ ∈ J`, with its distance from orthogonality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapMatrix {
    pub psi_hat: Vec<Vec<f64>>,
    /// `‖Ψ̂Ψ̂ᵀ − I‖_op`.
    pub defect: f64,
    /// `‖Ĥ − H‖_op / γ_J`.
    pub ratio: f64,
    /// `8K·ratio²`, valid when `ratio < 1/4`.
    pub bound: f64,
    pub condition_ok: bool,
}

impl OverlapMatrix {
    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(&self.psi_hat).expect("square overlap")
    }
}

/// `Ψ̂_J` from the two spectra; the perturbation is recovered from their reconstructions.
pub fn overlap(
    spec_h: &Spectrum,
    spec_hhat: &Spectrum,
    info: &IndexSetInfo,
) -> Result<OverlapMatrix> {
    if spec_h.dim() != spec_hhat.dim() {
        return Err(Error::DimMismatch(format!(
            "spectra of dims {} and {}",
            spec_h.dim(),
            spec_hhat.dim()
        )));
    }
    let pos = info.positions();
    let v = spec_h.eigenvectors.select_columns(&pos);
    let w = spec_hhat.eigenvectors.select_columns(&pos);
    let psi = v.transpose().matmul(&w);
    let defect = orthogonality_defect(&psi)?;

    let delta = spec_hhat.reconstruct().sub(&spec_h.reconstruct())?;
    let norm = op_norm(&delta)?;
    let ratio = if info.gamma_j.is_infinite() {
        0.0
    } else {
        norm / info.gamma_j
    };
    Ok(OverlapMatrix {
        psi_hat: psi.to_rows(),
        defect,
        ratio,
        bound: 8.0 * info.k_clusters as f64 * ratio * ratio,
        condition_ok: ratio < 0.25,
    })
}

/// `‖AAᵀ − I‖_op` for a square matrix.
pub fn orthogonality_defect(a: &Matrix) -> Result<f64> {
    if a.rows() != a.cols() {
        return Err(Error::DimMismatch(format!(
            "expected square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let e = a.matmul(&a.transpose()).sub(&Matrix::identity(a.rows()));
    op_norm_of(&e)
}

/// How far the congruence `U ↦ AUAᵀ` moves the trace and ordered spectrum of `U`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CongruenceShift {
    /// `‖AAᵀ − I‖_op`.
    pub defect: f64,
    pub trace_diff: f64,
    /// `‖spec↓(AUAᵀ) − spec↓(U)‖₂`; only defined for symmetric `U`.
    pub spectrum_diff: Option<f64>,
    /// `(3/2)‖U‖_F‖AAᵀ − I‖_op`, valid when the defect is below 1/2.
    pub bound: f64,
}

/// Trace and spectrum shift of `AUAᵀ` relative to `U` for a nearly orthogonal `A`.
pub fn congruence_shift(a: &Matrix, u: &Matrix) -> Result<CongruenceShift> {
    if u.rows() != a.rows() || u.cols() != a.cols() || a.rows() != a.cols() {
        return Err(Error::DimMismatch(format!(
            "A is {}x{}, U is {}x{}",
            a.rows(),
            a.cols(),
            u.rows(),
            u.cols()
        )));
    }
    let defect = orthogonality_defect(a)?;
    let c = a.matmul(u).matmul(&a.transpose());
    let symmetric = u.sub(&u.transpose()).max_abs() == 0.0;
    let spectrum_diff = if symmetric {
        let s_c = eigh(&SymmetricMatrix::new(c.clone())?)?.eigenvalues;
        let s_u = eigh(&SymmetricMatrix::new(u.clone())?)?.eigenvalues;
        Some(
            s_c.iter()
                .zip(&s_u)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
        )
    } else {
        None
    };
    Ok(CongruenceShift {
        defect,
        trace_diff: (c.trace() - u.trace()).abs(),
        spectrum_diff,
        bound: 1.5 * u.fro_norm() * defect,
    })
}

/// `B = (⟨Aψ_k, ψ_ℓ⟩)` for the orthonormal columns `ψ` of `basis`.
pub fn gram_compression(a: &SymmetricMatrix, basis: &Matrix) -> Result<SymmetricMatrix> {
    if basis.rows() != a.dim() {
        return Err(Error::DimMismatch(format!(
            "basis has {} rows, operator has dim {}",
            basis.rows(),
            a.dim()
        )));
    }
    SymmetricMatrix::new(basis.transpose().matmul(a.matrix()).matmul(basis))
}
