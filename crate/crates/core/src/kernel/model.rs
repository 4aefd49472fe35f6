use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::quadrature::unit_quadrature;
use crate::spectral::{default_cluster_tol, IndexSetInfo};

/// Largest rank accepted for finite-rank kernels.
pub const MAX_FINITE_RANK: usize = 16;
pub const DEFAULT_BROWNIAN_RANK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// `h(x, y) = Σ λ_k φ_k(x) φ_k(y)` with the cosine basis.
    FiniteRank,
    /// `h(s, t) = min(s, t)`.
    Brownian,
}

/// JSON description of a kernel: `{"kind": ..., "lambdas": [...], "R": 64}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub kind: KernelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

/// A Mercer kernel on `[0, 1]` under the uniform measure, with its top `R` eigenpairs.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelModel {
    kind: KernelKind,
    lambdas: Vec<f64>,
    /// `Σ_{k>R} λ_k`.
    tail_mass: f64,
    /// `λ_{R+1}` (zero when the spectrum is finite).
    next_lambda: f64,
}

impl KernelModel {
    /// Kernel with eigenfunctions `φ_1 ≡ 1`, `φ_k(x) = √2 cos((k−1)πx)`.
    pub fn finite_rank(lambdas: &[f64]) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() > MAX_FINITE_RANK {
            return Err(Error::BadSpectrum(format!(
                "expected 1..={MAX_FINITE_RANK} eigenvalues, got {}",
                lambdas.len()
            )));
        }
        if lambdas.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(Error::BadSpectrum("eigenvalues must be positive and finite".into()));
        }
        if lambdas.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::BadSpectrum("eigenvalues must be non-increasing".into()));
        }
        Ok(KernelModel {
            kind: KernelKind::FiniteRank,
            lambdas: lambdas.to_vec(),
            tail_mass: 0.0,
            next_lambda: 0.0,
        })
    }

    /// `h ≡ 1`.
    pub fn constant() -> Self {
        KernelModel::finite_rank(&[1.0]).expect("valid")
    }

    /// `min(s, t)` truncated to its top [`DEFAULT_BROWNIAN_RANK`] eigenpairs.
    pub fn brownian() -> Self {
        KernelModel::brownian_truncated(DEFAULT_BROWNIAN_RANK).expect("valid rank")
    }

    /// `min(s, t)` with `λ_k = ((k − ½)π)⁻²`, `φ_k(x) = √2 sin((k − ½)πx)`, truncated at `rank`.
    pub fn brownian_truncated(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::BadSpectrum("truncation rank must be positive".into()));
        }
        let lam = |k: usize| ((k as f64 - 0.5) * PI).powi(-2);
        let lambdas: Vec<f64> = (1..=rank).map(lam).collect();
        // Σ_k λ_k = ∫₀¹ min(x, x) dx = 1/2.
        let head: f64 = lambdas.iter().rev().sum();
        Ok(KernelModel {
            kind: KernelKind::Brownian,
            lambdas,
            tail_mass: (0.5 - head).max(0.0),
            next_lambda: lam(rank + 1),
        })
    }

    pub fn from_spec(spec: &KernelSpec) -> Result<Self> {
        match spec.kind {
            KernelKind::FiniteRank => {
                if spec.rank.is_some() {
                    return Err(Error::ConfigInvalid(
                        "\"R\" applies only to the brownian kernel".into(),
                    ));
                }
                let l = spec.lambdas.as_ref().ok_or_else(|| {
                    Error::ConfigInvalid("finite_rank kernel requires \"lambdas\"".into())
                })?;
                KernelModel::finite_rank(l)
            }
            KernelKind::Brownian => {
                if spec.lambdas.is_some() {
                    return Err(Error::ConfigInvalid(
                        "brownian kernel has a fixed spectrum; drop \"lambdas\"".into(),
                    ));
                }
                KernelModel::brownian_truncated(spec.rank.unwrap_or(DEFAULT_BROWNIAN_RANK))
            }
        }
    }

    pub fn spec(&self) -> KernelSpec {
        match self.kind {
            KernelKind::FiniteRank => KernelSpec {
                kind: self.kind,
                lambdas: Some(self.lambdas.clone()),
                rank: None,
            },
            KernelKind::Brownian => KernelSpec {
                kind: self.kind,
                lambdas: None,
                rank: Some(self.rank()),
            },
        }
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn is_finite_rank(&self) -> bool {
        self.kind == KernelKind::FiniteRank
    }

    /// Number of retained eigenpairs `R`.
    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `λ_k` for 1-based `k ≤ R`.
    pub fn lambda(&self, k: usize) -> f64 {
        self.lambdas[k - 1]
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn next_lambda(&self) -> f64 {
        self.next_lambda
    }

    /// `sup_x φ_k(x)²` over every eigenfunction of the kernel, including the discarded tail.
    pub fn eigenfunction_sup_sq(&self) -> f64 {
        if self.kind == KernelKind::FiniteRank && self.rank() == 1 {
            1.0
        } else {
            2.0
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            KernelKind::Brownian => x.min(y),
            KernelKind::FiniteRank => self
                .lambdas
                .iter()
                .enumerate()
                .map(|(i, l)| l * self.eigenfunction(i + 1, x) * self.eigenfunction(i + 1, y))
                .sum(),
        }
    }

    /// `φ_k(x)` for 1-based `k`.
    pub fn eigenfunction(&self, k: usize, x: f64) -> f64 {
        match self.kind {
            KernelKind::FiniteRank if k == 1 => 1.0,
            KernelKind::FiniteRank => SQRT_2 * ((k - 1) as f64 * PI * x).cos(),
            KernelKind::Brownian => SQRT_2 * ((k as f64 - 0.5) * PI * x).sin(),
        }
    }

    /// Writes `φ_1(x), …, φ_R(x)` into `out`.
    pub fn features_into(&self, x: f64, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.rank()) {
            *o = self.eigenfunction(i + 1, x);
        }
    }

    /// Index-set structure for the reference spectrum `λ_1, …, λ_R`.
    pub fn index_set(&self, j: &[usize]) -> Result<IndexSetInfo> {
        let mut eig = self.lambdas.clone();
        if self.kind == KernelKind::FiniteRank {
            // The operator has zero eigenvalues beyond the rank.
            eig.push(0.0);
        } else {
            eig.push(self.next_lambda);
        }
        let info = IndexSetInfo::from_eigenvalues(&eig, j, default_cluster_tol(eig[0]))?;
        if let Some(&k) = info.j_set.iter().find(|&&k| k > self.rank()) {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.rank(),
            });
        }
        Ok(info)
    }

    /// Orthonormality and eigen-equation residuals of the reference spectrum by quadrature.
    pub fn quadrature_check(&self) -> QuadratureCheck {
        let q = unit_quadrature();
        let r = self.rank();
        let table: Vec<Vec<f64>> = (1..=r)
            .map(|k| q.nodes.iter().map(|&x| self.eigenfunction(k, x)).collect())
            .collect();
        let mut orth = 0.0f64;
        for k in 0..r {
            for l in k..r {
                let v: f64 = q
                    .weights
                    .iter()
                    .zip(table[k].iter().zip(&table[l]))
                    .map(|(w, (a, b))| w * a * b)
                    .sum();
                let target = if k == l { 1.0 } else { 0.0 };
                orth = orth.max((v - target).abs());
            }
        }
        let mut eig = 0.0f64;
        let mut nodes = Vec::with_capacity(2 * q.nodes.len());
        let mut weights = Vec::with_capacity(2 * q.nodes.len());
        let mut kernel_row = Vec::with_capacity(2 * q.nodes.len());
        for g in 0..512 {
            let x = g as f64 / 511.0;
            // Split at x so the kink of min(x, ·) sits on an interval boundary.
            nodes.clear();
            weights.clear();
            for (a, b) in [(0.0, x), (x, 1.0)] {
                for (&t, &w) in q.nodes.iter().zip(&q.weights) {
                    nodes.push(a + (b - a) * t);
                    weights.push(w * (b - a));
                }
            }
            kernel_row.clear();
            kernel_row.extend(nodes.iter().map(|&t| self.eval(x, t)));
            for k in 1..=r {
                let integral: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .zip(&kernel_row)
                    .map(|((&t, &w), &h)| w * h * self.eigenfunction(k, t))
                    .sum();
                eig = eig.max((integral - self.lambda(k) * self.eigenfunction(k, x)).abs());
            }
        }
        QuadratureCheck {
            orthonormality: orth,
            eigen_equation: eig,
        }
    }
}

/// Largest residuals found by [`KernelModel::quadrature_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureCheck {
    /// `max |∫φ_kφ_ℓ dP − δ_kℓ|`.
    pub orthonormality: f64,
    /// `max_{k, x} |∫h(x, ·)φ_k dP − λ_kφ_k(x)|` over a 512-point grid.
    pub eigen_equation: f64,
}
