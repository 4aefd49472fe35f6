use crate::error::{Error, Result};
use crate::kernel::gram::GramSystem;
use crate::kernel::model::KernelModel;
use crate::kernel::sample::SampleSet;
use crate::kernel::EPS_EIG;

/// Out-of-sample extension `ψ̂_k(x) = λ̂_k^{-1/2} (1/n) Σ_i h(x, X_i) φ̂_k(i)`.
///
/// Stored as a kernel expansion `Σ_i c_i h(·, X_i)` with `c_i = φ̂_k(i) / (n √λ̂_k)`.
#[derive(Debug, Clone)]
pub struct NystromFunction {
    pub k: usize,
    pub lambda_hat: f64,
    model: KernelModel,
    points: Vec<f64>,
    coeffs: Vec<f64>,
}

/// Nyström extension of the `k`-th (1-based) Gram eigenvector.
pub fn nystrom(
    model: &KernelModel,
    sample: &SampleSet,
    gsys: &GramSystem,
    k: usize,
) -> Result<NystromFunction> {
    let n = gsys.n();
    if n != sample.points.len() {
        return Err(Error::DimMismatch(format!(
            "Gram system of size {n} for a sample of {}",
            sample.points.len()
        )));
    }
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let lambda_hat = gsys.eigenvalues[k - 1];
    if lambda_hat <= EPS_EIG {
        return Err(Error::ZeroEigenvalue {
            index: k,
            value: lambda_hat,
        });
    }
    let scale = 1.0 / (n as f64 * lambda_hat.sqrt());
    let coeffs = gsys.phi_hat(k).iter().map(|v| v * scale).collect();
    Ok(NystromFunction {
        k,
        lambda_hat,
        model: model.clone(),
        points: sample.points.clone(),
        coeffs,
    })
}

impl NystromFunction {
    pub fn eval(&self, x: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.coeffs)
            .map(|(&p, c)| c * self.model.eval(x, p))
            .sum()
    }

    /// `(ψ̂(X_i))_i`, which equals `√λ̂ φ̂`.
    pub fn sample_values(&self) -> Vec<f64> {
        self.points.iter().map(|&x| self.eval(x)).collect()
    }

    /// RKHS inner product `⟨ψ̂, ψ̂'⟩_H = cᵀ K c'` of two extensions built on the same sample.
    pub fn h_inner(&self, other: &NystromFunction) -> Result<f64> {
        if self.points != other.points {
            return Err(Error::DimMismatch(
                "Nyström functions come from different samples".into(),
            ));
        }
        let mut s = 0.0;
        for (i, &xi) in self.points.iter().enumerate() {
            let row: f64 = self
                .points
                .iter()
                .zip(&other.coeffs)
                .map(|(&xj, c)| c * self.model.eval(xi, xj))
                .sum();
            s += self.coeffs[i] * row;
        }
        Ok(s)
    }
}
