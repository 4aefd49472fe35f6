use serde::Serialize;

use crate::error::Result;
use crate::linalg::{Matrix, Spectrum, SymmetricMatrix};
use crate::spectral::{HoloFunction, IndexSetInfo};

/// `P_J = Σ_{k∈J} ψ_k ψ_kᵀ`.
pub fn eigenprojection(spec: &Spectrum, info: &IndexSetInfo) -> SymmetricMatrix {
    spec.weighted_sum(&info.positions(), |_, _| 1.0)
}

/// `Σ_{k∈J} f(λ_k) ψ_k ψ_kᵀ`.
pub fn compress(spec: &Spectrum, f: &HoloFunction, info: &IndexSetInfo) -> SymmetricMatrix {
    spec.weighted_sum(&info.positions(), |_, lam| f.eval(lam))
}

/// Perturbation `Ĥ − H` expressed in the eigenbasis of `H`: entry `(p, q)` is `⟨Δψ_p, ψ_q⟩`.
pub fn perturbation_coords(spec_h: &Spectrum, h_hat: &SymmetricMatrix) -> Result<Matrix> {
    if h_hat.dim() != spec_h.dim() {
        return Err(crate::Error::DimMismatch(format!(
            "spectrum has dim {}, perturbed matrix has dim {}",
            spec_h.dim(),
            h_hat.dim()
        )));
    }
    let mut d = spec_h.to_eigenbasis(h_hat.matrix());
    for (p, lam) in spec_h.eigenvalues.iter().enumerate() {
        d[(p, p)] -= lam;
    }
    // Enforce exact symmetry lost to rounding in VᵀĤV.
    let n = d.rows();
    for p in 0..n {
        for q in (p + 1)..n {
            let m = 0.5 * (d[(p, q)] + d[(q, p)]);
            d[(p, q)] = m;
            d[(q, p)] = m;
        }
    }
    Ok(d)
}

/// The three parts of the first-order term of `Cmp(Ĥ) − Cmp(H)` and their sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradCompress {
    /// Same-cluster blocks weighted by `f′(θ_j)`.
    pub part1: SymmetricMatrix,
    /// Cross-cluster blocks weighted by divided differences of `f`.
    pub part2: SymmetricMatrix,
    /// Inside/outside blocks weighted by `f(λ_k)/(λ_k − λ_ℓ)`.
    pub part3: SymmetricMatrix,
    pub total: SymmetricMatrix,
}

/// Eigen-coordinate weights of the three parts. Entries outside each part are zero.
pub(crate) fn grad_weights(
    spec_h: &Spectrum,
    f: &HoloFunction,
    info: &IndexSetInfo,
) -> [Matrix; 3] {
    let n = spec_h.dim();
    let lam = &spec_h.eigenvalues;
    let cluster: Vec<Option<usize>> = (1..=n).map(|k| info.cluster_of(k)).collect();
    let mut w = [Matrix::zeros(n, n), Matrix::zeros(n, n), Matrix::zeros(n, n)];
    for p in 0..n {
        for q in 0..n {
            match (cluster[p], cluster[q]) {
                (Some(a), Some(b)) if a == b => w[0][(p, q)] = f.derivative(info.thetas[a]),
                (Some(a), Some(b)) => {
                    let (ta, tb) = (info.thetas[a], info.thetas[b]);
                    w[1][(p, q)] = (f.eval(tb) - f.eval(ta)) / (tb - ta);
                }
                (Some(_), None) => w[2][(p, q)] = f.eval(lam[p]) / (lam[p] - lam[q]),
                (None, Some(_)) => w[2][(p, q)] = f.eval(lam[q]) / (lam[q] - lam[p]),
                (None, None) => {}
            }
        }
    }
    w
}

fn hadamard(a: &Matrix, b: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * b[(i, j)])
}

pub(crate) fn to_original(spec: &Spectrum, coords: &Matrix) -> Result<SymmetricMatrix> {
    SymmetricMatrix::new(spec.from_eigenbasis(coords))
}

/// First-order term of `Cmp(Ĥ, f, J) − Cmp(H, f, J)` split into its three parts.
pub fn grad_compress(
    spec_h: &Spectrum,
    h_hat: &SymmetricMatrix,
    f: &HoloFunction,
    info: &IndexSetInfo,
) -> Result<GradCompress> {
    let d = perturbation_coords(spec_h, h_hat)?;
    let [w1, w2, w3] = grad_weights(spec_h, f, info);
    let c1 = hadamard(&w1, &d);
    let c2 = hadamard(&w2, &d);
    let c3 = hadamard(&w3, &d);
    let total = c1.add(&c2).add(&c3);
    Ok(GradCompress {
        part1: to_original(spec_h, &c1)?,
        part2: to_original(spec_h, &c2)?,
        part3: to_original(spec_h, &c3)?,
        total: to_original(spec_h, &total)?,
    })
}
