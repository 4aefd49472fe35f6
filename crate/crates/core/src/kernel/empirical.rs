use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::gram::FeatureGram;
use crate::kernel::model::KernelModel;
use crate::kernel::sample::SampleSet;
use crate::linalg::{Matrix, SymmetricMatrix};
use crate::spectral::IndexSetInfo;

fn check_index(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        Err(Error::IndexOutOfRange { index: k, max })
    } else {
        Ok(())
    }
}

/// `(P_n − P)(φ_kφ_ℓ) = (1/n) Σ_i φ_k(X_i) φ_ℓ(X_i) − δ_kℓ` for 1-based `k, ℓ ≤ R`.
pub fn empirical_dev(model: &KernelModel, sample: &SampleSet, k: usize, l: usize) -> Result<f64> {
    check_index(k, model.rank())?;
    check_index(l, model.rank())?;
    let mean = sample
        .points
        .iter()
        .map(|&x| model.eigenfunction(k, x) * model.eigenfunction(l, x))
        .sum::<f64>()
        / sample.points.len() as f64;
    Ok(mean - if k == l { 1.0 } else { 0.0 })
}

/// `Υ̂` in the `φ` basis, restricted to indices `1..=r_trunc`, from the deviations
/// `dev[(k, ℓ)] = (P_n − P)(φ_kφ_ℓ)` (0-based).
pub fn upsilon_from_dev(
    lambdas: &[f64],
    dev: &Matrix,
    info: &IndexSetInfo,
    r_trunc: usize,
) -> Result<SymmetricMatrix> {
    let r = r_trunc.min(lambdas.len()).min(dev.rows());
    if r == 0 {
        return Err(Error::ConfigInvalid("truncation must be positive".into()));
    }
    if let Some(&k) = info.j_set.iter().find(|&&k| k > r) {
        return Err(Error::IndexOutOfRange { index: k, max: r });
    }
    let mut out = Matrix::zeros(r, r);
    for k in 0..r {
        for l in 0..r {
            let (kin, lin) = (info.contains(k + 1), info.contains(l + 1));
            out[(k, l)] = match (kin, lin) {
                (true, true) => dev[(k, l)],
                (false, false) => 0.0,
                (true, false) | (false, true) => {
                    // The weight belongs to whichever index lies in J.
                    let (a, b) = if kin { (k, l) } else { (l, k) };
                    let gap = lambdas[a] - lambdas[b];
                    if gap == 0.0 {
                        return Err(Error::ZeroGap {
                            inside: a + 1,
                            outside: b + 1,
                        });
                    }
                    lambdas[a] * dev[(k, l)] / gap
                }
            };
        }
    }
    SymmetricMatrix::new(out)
}

/// `Υ̂_{J,n}` over index pairs `k, ℓ ≤ r_trunc`.
pub fn upsilon_hat(
    model: &KernelModel,
    sample: &SampleSet,
    info: &IndexSetInfo,
    r_trunc: usize,
) -> Result<SymmetricMatrix> {
    if r_trunc > model.rank() {
        return Err(Error::IndexOutOfRange {
            index: r_trunc,
            max: model.rank(),
        });
    }
    let fg = FeatureGram::new(model, sample)?;
    upsilon_from_dev(model.lambdas(), &fg.deviation(), info, r_trunc)
}

/// The three sides of the bilinear-form expansion for one pair `(f, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BilinearDev {
    /// `⟨P̂_{J,n} S_n f, S_n g⟩_{L²(P_n)}`.
    pub empirical: f64,
    /// `⟨P_J f, g⟩_{L²(P)}`.
    pub population: f64,
    /// `⟨Υ̂_{J,n} f, g⟩_{L²(P)}`.
    pub predicted: f64,
}

impl BilinearDev {
    pub fn residual(&self) -> f64 {
        (self.empirical - self.population - self.predicted).abs()
    }
}

fn padded(coeffs: &[f64], r: usize) -> Result<Vec<f64>> {
    if coeffs.len() > r {
        return Err(Error::IndexOutOfRange {
            index: coeffs.len(),
            max: r,
        });
    }
    let mut v = coeffs.to_vec();
    v.resize(r, 0.0);
    Ok(v)
}

/// Bilinear-form triple from a precomputed feature Gram and `Υ̂`.
pub fn bilinear_from_gram(
    fg: &FeatureGram,
    info: &IndexSetInfo,
    upsilon: &SymmetricMatrix,
    f: &[f64],
    g: &[f64],
) -> Result<BilinearDev> {
    let r = upsilon.dim();
    let a = padded(f, r)?;
    let b = padded(g, r)?;
    let mut a_full = a.clone();
    a_full.resize(fg.rank(), 0.0);
    let mut b_full = b.clone();
    b_full.resize(fg.rank(), 0.0);
    let mut empirical = 0.0;
    let mut population = 0.0;
    for &k in &info.j_set {
        empirical += fg.coeff_inner(&a_full, k)? * fg.coeff_inner(&b_full, k)?;
        if k <= r {
            population += a[k - 1] * b[k - 1];
        }
    }
    let ub = upsilon.matrix().matvec(&b);
    let predicted = a.iter().zip(&ub).map(|(x, y)| x * y).sum();
    Ok(BilinearDev {
        empirical,
        population,
        predicted,
    })
}

/// Empirical, population and first-order predicted values of `⟨P_J f, g⟩` for
/// `f = Σ a_k φ_k`, `g = Σ b_k φ_k` with `k ≤ r_trunc`.
///
/// The empirical projection is computed through the retained features, which is exact for
/// finite-rank kernels and uses the truncated kernel otherwise.
pub fn bilinear_projection_dev(
    model: &KernelModel,
    sample: &SampleSet,
    info: &IndexSetInfo,
    f: &[f64],
    g: &[f64],
    r_trunc: usize,
) -> Result<BilinearDev> {
    let fg = FeatureGram::new(model, sample)?;
    let ups = upsilon_from_dev(model.lambdas(), &fg.deviation(), info, r_trunc)?;
    bilinear_from_gram(&fg, info, &ups, f, g)
}

/// `⟨f, g⟩_H = Σ a_k b_k / λ_k`.
pub fn rkhs_inner(model: &KernelModel, a: &[f64], b: &[f64]) -> Result<f64> {
    let r = model.rank();
    let (a, b) = (padded(a, r)?, padded(b, r)?);
    Ok(a.iter()
        .zip(&b)
        .zip(model.lambdas())
        .map(|((x, y), l)| x * y / l)
        .sum())
}

pub fn rkhs_norm(model: &KernelModel, a: &[f64]) -> Result<f64> {
    Ok(rkhs_inner(model, a, a)?.sqrt())
}

/// Coefficients of `Ĥ_n f` in the `φ` basis: `λ_k Σ_m P_n(φ_kφ_m) a_m`.
pub fn empirical_operator_coeffs(fg: &FeatureGram, a: &[f64]) -> Result<Vec<f64>> {
    let a = padded(a, fg.rank())?;
    Ok(fg
        .second_moments
        .matvec(&a)
        .iter()
        .zip(&fg.lambdas)
        .map(|(v, l)| v * l)
        .collect())
}

/// `(f(X_i))_i` for `f = Σ a_k φ_k`.
pub fn sample_function(model: &KernelModel, sample: &SampleSet, a: &[f64]) -> Result<Vec<f64>> {
    let a = padded(a, model.rank())?;
    Ok(sample
        .points
        .iter()
        .map(|&x| {
            a.iter()
                .enumerate()
                .map(|(k, c)| c * model.eigenfunction(k + 1, x))
                .sum()
        })
        .collect())
}
