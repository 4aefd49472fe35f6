use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Spectrum;

/// Relative tolerance used to decide that two computed eigenvalues are equal.
pub const CLUSTER_REL_TOL: f64 = 1e-9;

/// Default grouping tolerance for a spectrum whose leading eigenvalue is `lambda_1`.
pub fn default_cluster_tol(lambda_1: f64) -> f64 {
    CLUSTER_REL_TOL * lambda_1.abs().max(1.0)
}

/// An index set `J` of eigenvalue positions together with its cluster structure and gaps.
///
/// Indices are 1-based positions in the non-increasing spectrum. A gap is `+∞` when
/// there is nothing on the other side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSetInfo {
    pub j_set: Vec<usize>,
    /// `J_1, …, J_K`, each a list of 1-based indices sharing one distinct eigenvalue.
    pub clusters: Vec<Vec<usize>>,
    /// Distinct values `θ_1 > … > θ_K`.
    pub thetas: Vec<f64>,
    /// Outer gap `γ_J`.
    pub gamma_j: f64,
    /// Per-cluster gaps `γ_{J_j}`.
    pub gamma_jj: Vec<f64>,
    pub k_clusters: usize,
    /// Eigenvalues the structure was built from (all positions, non-increasing).
    pub eigenvalues: Vec<f64>,
}

impl IndexSetInfo {
    /// Builds the structure from a non-increasing eigenvalue list.
    pub fn from_eigenvalues(eigenvalues: &[f64], j: &[usize], cluster_tol: f64) -> Result<Self> {
        if j.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        let dim = eigenvalues.len();
        let mut j_set = j.to_vec();
        j_set.sort_unstable();
        j_set.dedup();
        if let Some(&bad) = j_set.iter().find(|&&k| k == 0 || k > dim) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                max: dim,
            });
        }
        let lam = |k: usize| eigenvalues[k - 1];
        let outside: Vec<usize> = (1..=dim).filter(|k| !j_set.contains(k)).collect();

        let mut gamma_j = f64::INFINITY;
        for &k in &j_set {
            for &l in &outside {
                let d = (lam(k) - lam(l)).abs();
                if d <= cluster_tol {
                    return Err(Error::ZeroGap {
                        inside: k,
                        outside: l,
                    });
                }
                gamma_j = gamma_j.min(d);
            }
        }

        // Positions are sorted and eigenvalues non-increasing, so equal values are adjacent.
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &k in &j_set {
            match clusters.last_mut() {
                Some(c) if (lam(c[0]) - lam(k)).abs() <= cluster_tol => c.push(k),
                _ => clusters.push(vec![k]),
            }
        }
        let thetas: Vec<f64> = clusters
            .iter()
            .map(|c| c.iter().map(|&k| lam(k)).sum::<f64>() / c.len() as f64)
            .collect();
        let gamma_jj = clusters
            .iter()
            .zip(&thetas)
            .map(|(c, &theta)| {
                (1..=dim)
                    .filter(|l| !c.contains(l))
                    .map(|l| (theta - lam(l)).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();

        Ok(IndexSetInfo {
            j_set,
            k_clusters: clusters.len(),
            clusters,
            thetas,
            gamma_j,
            gamma_jj,
            eigenvalues: eigenvalues.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `θ_max = θ_1`.
    pub fn theta_max(&self) -> f64 {
        self.thetas[0]
    }

    /// 0-based positions of `J`.
    pub fn positions(&self) -> Vec<usize> {
        self.j_set.iter().map(|k| k - 1).collect()
    }

    /// 0-based positions outside `J`.
    pub fn outside_positions(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|p| !self.j_set.contains(&(p + 1)))
            .collect()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.j_set.contains(&index)
    }

    /// Cluster number (0-based) of a 1-based index in `J`.
    pub fn cluster_of(&self, index: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.contains(&index))
    }
}

/// Index-set structure for a computed spectrum with the default cluster tolerance.
pub fn build_index_set(spec: &Spectrum, j: &[usize]) -> Result<IndexSetInfo> {
    let tol = default_cluster_tol(spec.eigenvalues.first().copied().unwrap_or(0.0));
    IndexSetInfo::from_eigenvalues(&spec.eigenvalues, j, tol)
}
