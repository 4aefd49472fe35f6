use crate::error::{Error, Result};
use crate::kernel::model::KernelModel;
use crate::kernel::sample::SampleSet;
use crate::linalg::{eigh, Matrix, Spectrum, SymmetricMatrix};

/// The Gram matrix `Ĥ_n = (h(X_i, X_j)/n)` with its eigenpairs.
///
/// Column `k` of `phi_hat` is the eigenvector for `eigenvalues[k]`, scaled to unit norm in
/// `L²(P_n)`, so its Euclidean norm is `√n`.
#[derive(Debug, Clone)]
pub struct GramSystem {
    pub gram: SymmetricMatrix,
    pub eigenvalues: Vec<f64>,
    pub phi_hat: Matrix,
}

impl GramSystem {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `φ̂_k` for 1-based `k`.
    pub fn phi_hat(&self, k: usize) -> Vec<f64> {
        self.phi_hat.column(k - 1)
    }

    /// Number of eigenvalues above `tol`.
    pub fn numerical_rank(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > tol).count()
    }
}

/// Dense Gram matrix and its full eigen-decomposition.
pub fn gram(model: &KernelModel, sample: &SampleSet) -> Result<GramSystem> {
    let n = sample.points.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let x = &sample.points;
    let inv = 1.0 / n as f64;
    let m = Matrix::from_fn(n, n, |i, j| model.eval(x[i], x[j]) * inv);
    let gram = SymmetricMatrix::new(m)?;
    let spec = eigh(&gram)?;
    let root_n = (n as f64).sqrt();
    let phi_hat = spec.eigenvectors.scale(root_n);
    Ok(GramSystem {
        gram,
        eigenvalues: spec.eigenvalues,
        phi_hat,
    })
}

/// The Gram spectrum through the `R` retained features.
///
/// With `Φ = (φ_k(X_i))` of size `n × R`, the nonzero eigenvalues of `Ĥ_n = Φ Λ Φᵀ / n`
/// coincide with those of the `R × R` matrix `C = Λ^{1/2} (ΦᵀΦ/n) Λ^{1/2}`, which is the
/// empirical operator in the `ψ_k = √λ_k φ_k` coordinates. For finite-rank kernels this is
/// exact. For a truncated kernel it is the Gram matrix of the truncation.
#[derive(Debug, Clone)]
pub struct FeatureGram {
    pub n: usize,
    pub lambdas: Vec<f64>,
    /// `Φ`, one row per sample point.
    pub features: Matrix,
    /// `ΦᵀΦ/n`, the empirical second moments `P_n(φ_kφ_ℓ)`.
    pub second_moments: Matrix,
    /// Eigen-decomposition of `C`.
    pub spectrum: Spectrum,
}

impl FeatureGram {
    pub fn new(model: &KernelModel, sample: &SampleSet) -> Result<Self> {
        let n = sample.points.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let r = model.rank();
        let mut features = Matrix::zeros(n, r);
        let mut row = vec![0.0; r];
        let mut moments = vec![0.0; r * r];
        for (i, &x) in sample.points.iter().enumerate() {
            model.features_into(x, &mut row);
            for k in 0..r {
                features[(i, k)] = row[k];
                let rk = row[k];
                for l in k..r {
                    moments[k * r + l] += rk * row[l];
                }
            }
        }
        let inv = 1.0 / n as f64;
        let second_moments = Matrix::from_fn(r, r, |k, l| {
            let (a, b) = if k <= l { (k, l) } else { (l, k) };
            moments[a * r + b] * inv
        });
        let lambdas = model.lambdas().to_vec();
        let c = Matrix::from_fn(r, r, |k, l| {
            (lambdas[k] * lambdas[l]).sqrt() * second_moments[(k, l)]
        });
        let spectrum = eigh(&SymmetricMatrix::new(c)?)?;
        Ok(FeatureGram {
            n,
            lambdas,
            features,
            second_moments,
            spectrum,
        })
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    /// Leading eigenvalues of `Ĥ_n` (the remaining `n − R` are zero).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// `(P_n − P)(φ_kφ_ℓ)` for all retained pairs, 0-based.
    pub fn deviation(&self) -> Matrix {
        let r = self.rank();
        Matrix::from_fn(r, r, |k, l| {
            self.second_moments[(k, l)] - if k == l { 1.0 } else { 0.0 }
        })
    }

    /// `Ĥ_n − H` in `ψ` coordinates: `√(λ_kλ_ℓ) (P_n − P)(φ_kφ_ℓ)`.
    pub fn deviation_operator(&self) -> SymmetricMatrix {
        let d = self.deviation();
        let l = &self.lambdas;
        SymmetricMatrix::new(Matrix::from_fn(self.rank(), self.rank(), |i, j| {
            (l[i] * l[j]).sqrt() * d[(i, j)]
        }))
        .expect("finite deviation")
    }

    /// `Ĥ_n` restricted to the retained `ψ` coordinates: `√(λ_kλ_ℓ) P_n(φ_kφ_ℓ)`.
    pub fn head_operator(&self) -> SymmetricMatrix {
        let l = &self.lambdas;
        SymmetricMatrix::new(Matrix::from_fn(self.rank(), self.rank(), |i, j| {
            (l[i] * l[j]).sqrt() * self.second_moments[(i, j)]
        }))
        .expect("finite head")
    }

    fn check_position(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.rank() {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.rank(),
            });
        }
        let mu = self.spectrum.eigenvalues[k - 1];
        if mu <= super::EPS_EIG {
            return Err(Error::ZeroEigenvalue { index: k, value: mu });
        }
        Ok(())
    }

    /// `⟨S_n f, φ̂_k⟩_{L²(P_n)}` for `f = Σ a_m φ_m`: equals `√μ_k aᵀ Λ^{-1/2} u_k`.
    pub fn coeff_inner(&self, coeffs: &[f64], k: usize) -> Result<f64> {
        self.check_position(k)?;
        let u = self.spectrum.vector(k - 1);
        let mu = self.spectrum.eigenvalues[k - 1];
        let s: f64 = coeffs
            .iter()
            .zip(&self.lambdas)
            .zip(&u)
            .map(|((a, l), u)| a * u / l.sqrt())
            .sum();
        Ok(mu.sqrt() * s)
    }

    /// `φ̂_k = Φ Λ^{1/2} u_k / √μ_k` at the sample points, for 1-based `k`.
    pub fn phi_hat(&self, k: usize) -> Result<Vec<f64>> {
        self.check_position(k)?;
        let u = self.spectrum.vector(k - 1);
        let mu = self.spectrum.eigenvalues[k - 1];
        let w: Vec<f64> = u
            .iter()
            .zip(&self.lambdas)
            .map(|(u, l)| u * l.sqrt() / mu.sqrt())
            .collect();
        Ok(self.features.matvec(&w))
    }
}
