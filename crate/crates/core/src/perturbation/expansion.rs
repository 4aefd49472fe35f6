use crate::error::{Error, Result};
use crate::linalg::{eigh, op_norm, Matrix, Spectrum, SymmetricMatrix};
use crate::perturbation::{ExpansionReport, Quantity, Regime};
use crate::spectral::{
    compress, eigenprojection, grad_weights, perturbation_coords, to_original, HoloFunction,
    IndexSetInfo,
};

/// `Ŝ_J`: first-order term of `P̂_J − P_J`.
///
/// In the eigenbasis of `H` its only nonzero entries are `⟨Δψ_k, ψ_ℓ⟩/(λ_k − λ_ℓ)` for
/// `k ∈ J, ℓ ∉ J`, mirrored.
pub fn s_hat(
    spec_h: &Spectrum,
    h_hat: &SymmetricMatrix,
    info: &IndexSetInfo,
) -> Result<SymmetricMatrix> {
    let d = perturbation_coords(spec_h, h_hat)?;
    let [_, _, w3] = grad_weights(spec_h, &HoloFunction::One, info);
    to_original(spec_h, &hadamard(&w3, &d))
}

/// `Â_J = P_J Δ P_J + Σ_{k∈J} λ_k Σ_{ℓ∉J} (Q_k Δ Q_ℓ + Q_ℓ Δ Q_k)/(λ_k − λ_ℓ)`.
pub fn a_hat(
    spec_h: &Spectrum,
    h_hat: &SymmetricMatrix,
    info: &IndexSetInfo,
) -> Result<SymmetricMatrix> {
    let d = perturbation_coords(spec_h, h_hat)?;
    let [_, _, w3] = grad_weights(spec_h, &HoloFunction::Identity, info);
    let inside = info.positions();
    let mut c = hadamard(&w3, &d);
    for &p in &inside {
        for &q in &inside {
            c[(p, q)] = d[(p, q)];
        }
    }
    to_original(spec_h, &c)
}

fn hadamard(a: &Matrix, b: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * b[(i, j)])
}

/// Everything the expansions share: the perturbation in eigen-coordinates and the perturbed spectrum.
struct Setup {
    d: Matrix,
    norm: f64,
    spec_hat: Spectrum,
}

fn setup(spec_h: &Spectrum, h_hat: &SymmetricMatrix) -> Result<Setup> {
    let d = perturbation_coords(spec_h, h_hat)?;
    let norm = op_norm(&SymmetricMatrix::new(d.clone())?)?;
    let spec_hat = eigh(h_hat)?;
    Ok(Setup { d, norm, spec_hat })
}

/// `x / γ`, zero when the gap is unbounded.
fn gap_ratio(norm: f64, gap: f64) -> f64 {
    if gap.is_infinite() {
        0.0
    } else {
        norm / gap
    }
}

/// Under the gap condition Weyl's inequality keeps every perturbed eigenvalue outside `J`
/// off the disks of radius `γ_J/2` around the cluster values; seeing one inside means the
/// computed spectrum contradicts the condition.
fn check_gap(spec_hat: &Spectrum, info: &IndexSetInfo, condition_ok: bool) -> Result<()> {
    if !condition_ok || info.gamma_j.is_infinite() {
        return Ok(());
    }
    let radius = info.gamma_j / 2.0;
    for p in info.outside_positions() {
        let lam = spec_hat.eigenvalues[p];
        if info.thetas.iter().any(|t| (lam - t).abs() < radius) {
            return Err(Error::GapViolation { index: p + 1 });
        }
    }
    Ok(())
}

fn op_diff(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<f64> {
    op_norm(&a.sub(b)?)
}

/// Compares `P̂_J` with `P_J + Ŝ_J`; the bound is `8K(‖Δ‖/γ_J)²`, valid when the ratio is below 1/4.
pub fn projection_expansion(
    spec_h: &Spectrum,
    h_hat: &SymmetricMatrix,
    info: &IndexSetInfo,
) -> Result<ExpansionReport> {
    let s = setup(spec_h, h_hat)?;
    let ratio = gap_ratio(s.norm, info.gamma_j);
    let condition_ok = ratio < 0.25;
    check_gap(&s.spec_hat, info, condition_ok)?;

    let predicted = eigenprojection(spec_h, info).add(&s_hat(spec_h, h_hat, info)?)?;
    let actual = eigenprojection(&s.spec_hat, info);
    Ok(ExpansionReport {
        regime: Regime::Projection,
        ratio,
        condition_ok,
        remainder: op_diff(&actual, &predicted)?,
        bound: 8.0 * info.k_clusters as f64 * ratio * ratio,
        predicted: Quantity::from_matrix(predicted.matrix()),
        actual: Quantity::from_matrix(actual.matrix()),
        perturbation_norm: s.norm,
        cluster_ratios: Vec::new(),
        cluster_condition_ok: Vec::new(),
    })
}

/// Compares `Ĥ P̂_J` with `H P_J + Â_J`; the bound is `4K(γ_J + 2θ_max)(‖Δ‖/γ_J)²`.
pub fn canonical_expansion(
    spec_h: &Spectrum,
    h_hat: &SymmetricMatrix,
    info: &IndexSetInfo,
) -> Result<ExpansionReport> {
    let s = setup(spec_h, h_hat)?;
    let ratio = gap_ratio(s.norm, info.gamma_j);
    let condition_ok = ratio < 0.25;
    check_gap(&s.spec_hat, info, condition_ok)?;

    let predicted =
        compress(spec_h, &HoloFunction::Identity, info).add(&a_hat(spec_h, h_hat, info)?)?;
    let actual = compress(&s.spec_hat, &HoloFunction::Identity, info);
    let bound = if ratio == 0.0 {
        0.0
    } else {
        4.0 * info.k_clusters as f64 * (info.gamma_j + 2.0 * info.theta_max()) * ratio * ratio
    };
    Ok(ExpansionReport {
        regime: Regime::Canonical,
        ratio,
        condition_ok,
        remainder: op_diff(&actual, &predicted)?,
        bound,
        predicted: Quantity::from_matrix(predicted.matrix()),
        actual: Quantity::from_matrix(actual.matrix()),
        perturbation_norm: s.norm,
        cluster_ratios: Vec::new(),
        cluster_condition_ok: Vec::new(),
    })
}

fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Eigenvalue shifts `(λ̂_k − λ_k)_{k∈J}` against the concatenated ordered spectra of the
/// per-cluster blocks `(⟨Δψ_k, ψ_ℓ⟩)_{k,ℓ∈J_j}`.
///
/// The bound is `sqrt(Σ_j |J_j|(11γ_{J_j} + 32θ_j)²/4 · (‖Δ‖/γ_{J_j})⁴)`; the condition is
/// `‖Δ‖/γ_{J_j} < 1/4` for every cluster.
pub fn eigval_expansion_separated(
    spec_h: &Spectrum,
    h_hat: &SymmetricMatrix,
    info: &IndexSetInfo,
) -> Result<ExpansionReport> {
    let s = setup(spec_h, h_hat)?;
    let cluster_ratios: Vec<f64> = info
        .gamma_jj
        .iter()
        .map(|&g| gap_ratio(s.norm, g))
        .collect();
    let cluster_condition_ok: Vec<bool> = cluster_ratios.iter().map(|&r| r < 0.25).collect();
    let ratio = cluster_ratios.iter().cloned().fold(0.0, f64::max);
    let condition_ok = cluster_condition_ok.iter().all(|&ok| ok);
    let outer_ok = gap_ratio(s.norm, info.gamma_j) < 0.25;
    check_gap(&s.spec_hat, info, condition_ok && outer_ok)?;

    let mut predicted = Vec::with_capacity(info.j_set.len());
    let mut sum_sq = 0.0;
    for (j, cluster) in info.clusters.iter().enumerate() {
        let pos: Vec<usize> = cluster.iter().map(|k| k - 1).collect();
        let block = SymmetricMatrix::new(s.d.select(&pos, &pos))?;
        predicted.extend(eigh(&block)?.eigenvalues);
        let g = info.gamma_jj[j];
        if g.is_finite() {
            let r = cluster_ratios[j];
            let c = 11.0 * g + 32.0 * info.thetas[j];
            sum_sq += cluster.len() as f64 * c * c / 4.0 * r.powi(4);
        }
    }
    let actual: Vec<f64> = info
        .positions()
        .iter()
        .map(|&p| s.spec_hat.eigenvalues[p] - spec_h.eigenvalues[p])
        .collect();
    Ok(ExpansionReport {
        regime: Regime::Separated,
        ratio,
        condition_ok,
        remainder: l2_dist(&actual, &predicted),
        bound: sum_sq.sqrt(),
        predicted: Quantity::Vector(predicted),
        actual: Quantity::Vector(actual),
        perturbation_norm: s.norm,
        cluster_ratios,
        cluster_condition_ok,
    })
}

/// `Σ_{k∈J}(λ̂_k − λ_k)` against `Σ_{k∈J}⟨Δψ_k, ψ_k⟩`.
///
/// The bound is `K√|J|(3γ_J/(2√K) + 4γ_J + 14θ_max)(‖Δ‖/γ_J)²`, valid when the ratio is
/// below `1/(4√K)`.
pub fn eigval_expansion_clustered(
    spec_h: &Spectrum,
    h_hat: &SymmetricMatrix,
    info: &IndexSetInfo,
) -> Result<ExpansionReport> {
    let s = setup(spec_h, h_hat)?;
    let k = info.k_clusters as f64;
    let ratio = gap_ratio(s.norm, info.gamma_j);
    let condition_ok = ratio < 1.0 / (4.0 * k.sqrt());
    check_gap(&s.spec_hat, info, condition_ok)?;

    let pos = info.positions();
    let predicted: f64 = pos.iter().map(|&p| s.d[(p, p)]).sum();
    let actual: f64 = pos
        .iter()
        .map(|&p| s.spec_hat.eigenvalues[p] - spec_h.eigenvalues[p])
        .sum();
    let g = info.gamma_j;
    let bound = if ratio == 0.0 {
        0.0
    } else {
        k * (pos.len() as f64).sqrt()
            * (1.5 * g / k.sqrt() + 4.0 * g + 14.0 * info.theta_max())
            * ratio
            * ratio
    };
    Ok(ExpansionReport {
        regime: Regime::Clustered,
        ratio,
        condition_ok,
        remainder: (actual - predicted).abs(),
        bound,
        predicted: Quantity::Scalar(predicted),
        actual: Quantity::Scalar(actual),
        perturbation_norm: s.norm,
        cluster_ratios: Vec::new(),
        cluster_condition_ok: Vec::new(),
    })
}
