use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{
    bernstein_constants, bernstein_radius, rkhs_norm, BernsteinConstants, KernelModel, KernelSpec,
};
use crate::spectral::IndexSetInfo;

pub const DEFAULT_TAU: f64 = 0.1;
pub const DEFAULT_LIMIT_DRAWS: usize = 10_000;

fn default_tau() -> f64 {
    DEFAULT_TAU
}

fn default_draws() -> usize {
    DEFAULT_LIMIT_DRAWS
}

/// Which Monte Carlo study to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyKind {
    Eigenvalue,
    Projection,
    Opnorm,
    Limit,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Eigenvalue => "eigenvalue",
            StudyKind::Projection => "projection",
            StudyKind::Opnorm => "opnorm",
            StudyKind::Limit => "limit",
        }
    }
}

/// Settings shared by every study.
///
/// `functions` is the finite class `F`, each entry the coefficients of `f = Σ a_k φ_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub kernel: KernelSpec,
    pub n: usize,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub j_set: Vec<usize>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_trunc: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<Vec<f64>>,
    /// Gap tolerance of the index-set estimator; calibrated from warm-up trials when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    /// Cluster rank of `J` for the index-set estimator; the estimator is off when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_rank: Option<usize>,
    #[serde(default = "default_draws")]
    pub limit_draws: usize,
}

impl McConfig {
    pub fn new(kernel: KernelSpec, n: usize, trials: usize, seed: u64, j_set: Vec<usize>) -> Self {
        McConfig {
            kernel,
            n,
            trials,
            seed,
            j_set,
            tau: DEFAULT_TAU,
            r_trunc: None,
            functions: Vec::new(),
            gap_tol: None,
            cluster_rank: None,
            limit_draws: DEFAULT_LIMIT_DRAWS,
        }
    }

    /// Checks every field and derives the kernel, index set and concentration constants.
    pub fn validate(&self) -> Result<Prepared> {
        if self.trials == 0 {
            return Err(Error::ConfigInvalid("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::ConfigInvalid("n must be at least 1".into()));
        }
        if u32::try_from(self.trials).is_err() {
            return Err(Error::ConfigInvalid("too many trials".into()));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::BadTau(self.tau));
        }
        if self.limit_draws == 0 {
            return Err(Error::ConfigInvalid("limit_draws must be at least 1".into()));
        }
        if let Some(g) = self.gap_tol {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::ConfigInvalid(format!("gap_tol must be non-negative, got {g}")));
            }
        }
        let model = KernelModel::from_spec(&self.kernel)?;
        let r_trunc = self.r_trunc.unwrap_or(model.rank());
        if r_trunc == 0 || r_trunc > model.rank() {
            return Err(Error::ConfigInvalid(format!(
                "r_trunc must lie in 1..={}, got {r_trunc}",
                model.rank()
            )));
        }
        let info = model.index_set(&self.j_set)?;
        if let Some(&k) = info.j_set.iter().find(|&&k| k > r_trunc) {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: r_trunc,
            });
        }
        let mut m_f: f64 = 0.0;
        for (i, f) in self.functions.iter().enumerate() {
            if f.len() > r_trunc {
                return Err(Error::ConfigInvalid(format!(
                    "function {i} has {} coefficients, more than r_trunc = {r_trunc}",
                    f.len()
                )));
            }
            if f.iter().any(|c| !c.is_finite()) {
                return Err(Error::ConfigInvalid(format!("function {i} has a non-finite coefficient")));
            }
            m_f = m_f.max(rkhs_norm(&model, f)?);
        }
        let constants = bernstein_constants(&model)?;
        let radius = bernstein_radius(&constants, self.n, self.tau)?;
        Ok(Prepared {
            model,
            info,
            constants,
            radius,
            r_trunc,
            m_f,
        })
    }
}

/// Quantities derived once per study from a validated [`McConfig`].
#[derive(Debug, Clone)]
pub struct Prepared {
    pub model: KernelModel,
    pub info: IndexSetInfo,
    pub constants: BernsteinConstants,
    /// Deviation radius at the configured `n` and `τ`.
    pub radius: f64,
    pub r_trunc: usize,
    /// `max_{f∈F} ‖f‖_H`.
    pub m_f: f64,
}
