use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::{all_fixtures, MatrixFixture};
use crate::kernel::KernelSpec;
use crate::linalg::{MatrixJson, SymmetricMatrix};
use crate::montecarlo::{McConfig, StudyKind, DEFAULT_LIMIT_DRAWS, DEFAULT_TAU};

/// A matrix given inline or as a path to a matrix JSON file (relative to the config file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSource {
    Inline(MatrixJson),
    Path(PathBuf),
}

impl MatrixSource {
    pub fn load(&self, base: &Path) -> Result<SymmetricMatrix> {
        match self {
            MatrixSource::Inline(m) => SymmetricMatrix::from_json(m),
            MatrixSource::Path(p) => {
                let path = if p.is_absolute() { p.clone() } else { base.join(p) };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                SymmetricMatrix::from_json_str(&text)
            }
        }
    }
}

/// Input of `expand`: a named fixture or an explicit `H`, and one way of giving `Ĥ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<MatrixSource>,
    /// `Ĥ` itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_hat: Option<MatrixSource>,
    /// `Δ = Ĥ − H`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<MatrixSource>,
    /// Direction `E` with `Ĥ = H + εE`; a fixture supplies its own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<MatrixSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_set: Option<Vec<usize>>,
}

/// Fully loaded `expand` input.
#[derive(Debug, Clone)]
pub struct ExpandInput {
    pub h: SymmetricMatrix,
    pub h_hat: SymmetricMatrix,
    pub j_set: Vec<usize>,
}

pub fn find_fixture(name: &str) -> Result<MatrixFixture> {
    all_fixtures()
        .into_iter()
        .find(|f| f.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            let names: Vec<String> = all_fixtures().into_iter().map(|f| f.name).collect();
            Error::ConfigInvalid(format!(
                "unknown fixture {name:?}; known fixtures: {}",
                names.join(", ")
            ))
        })
}

impl ExpandConfig {
    pub fn load(&self, base: &Path) -> Result<ExpandInput> {
        let fixture = self.fixture.as_deref().map(find_fixture).transpose()?;
        let h = match (&self.h, &fixture) {
            (Some(_), Some(_)) => {
                return Err(Error::ConfigInvalid("give either \"fixture\" or \"h\", not both".into()))
            }
            (Some(src), None) => src.load(base)?,
            (None, Some(f)) => f.h.clone(),
            (None, None) => return Err(Error::ConfigInvalid("missing \"h\" or \"fixture\"".into())),
        };
        let j_set = self
            .j_set
            .clone()
            .or_else(|| fixture.as_ref().map(|f| f.j_set.clone()))
            .ok_or_else(|| Error::ConfigInvalid("missing \"j_set\"".into()))?;

        let given = [self.h_hat.is_some(), self.perturbation.is_some(), self.direction.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given > 1 {
            return Err(Error::ConfigInvalid(
                "give only one of \"h_hat\", \"perturbation\" and \"direction\"".into(),
            ));
        }
        if self.eps.is_some() && (self.h_hat.is_some() || self.perturbation.is_some()) {
            return Err(Error::ConfigInvalid(
                "\"eps\" scales a direction; it cannot be combined with \"h_hat\" or \"perturbation\"".into(),
            ));
        }
        let h_hat = if let Some(src) = &self.h_hat {
            src.load(base)?
        } else if let Some(src) = &self.perturbation {
            h.add(&src.load(base)?)?
        } else {
            let dir = match (&self.direction, &fixture) {
                (Some(src), _) => src.load(base)?,
                (None, Some(f)) => f.direction.clone(),
                (None, None) => {
                    return Err(Error::ConfigInvalid(
                        "missing \"h_hat\", \"perturbation\" or \"direction\"".into(),
                    ))
                }
            };
            let eps = self
                .eps
                .ok_or_else(|| Error::ConfigInvalid("missing \"eps\" for the direction".into()))?;
            if !eps.is_finite() {
                return Err(Error::ConfigInvalid(format!("eps must be finite, got {eps}")));
            }
            h.add(&dir.scale(eps)?)?
        };
        if h_hat.dim() != h.dim() {
            return Err(Error::DimMismatch(format!(
                "H is {0}x{0} but the perturbed matrix is {1}x{1}",
                h.dim(),
                h_hat.dim()
            )));
        }
        Ok(ExpandInput { h, h_hat, j_set })
    }
}

fn default_tau() -> f64 {
    DEFAULT_TAU
}

fn default_draws() -> usize {
    DEFAULT_LIMIT_DRAWS
}

/// Input of `kernel-study`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelStudyConfig {
    pub study: StudyKind,
    pub kernel: KernelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Runs the study once per sample size instead of once at `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_sweep: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_set: Option<Vec<usize>>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_trunc: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_rank: Option<usize>,
    #[serde(default = "default_draws")]
    pub limit_draws: usize,
}

impl KernelStudyConfig {
    /// The Monte Carlo configuration and the sample sizes to run.
    pub fn to_mc(&self) -> Result<(McConfig, Vec<usize>)> {
        let ns = match (&self.n_sweep, self.n) {
            (Some(v), None) if !v.is_empty() => v.clone(),
            (Some(_), None) => return Err(Error::ConfigInvalid("\"n_sweep\" is empty".into())),
            (None, Some(n)) => vec![n],
            (Some(_), Some(_)) => {
                return Err(Error::ConfigInvalid("give either \"n\" or \"n_sweep\", not both".into()))
            }
            (None, None) => return Err(Error::ConfigInvalid("missing \"n\"".into())),
        };
        let trials = self
            .trials
            .ok_or_else(|| Error::ConfigInvalid("missing \"trials\"".into()))?;
        let j_set = match (&self.j_set, self.study) {
            (Some(j), _) => j.clone(),
            // The operator-norm study does not depend on an index set.
            (None, StudyKind::Opnorm) => vec![1],
            (None, _) => return Err(Error::ConfigInvalid("missing \"j_set\"".into())),
        };
        let cfg = McConfig {
            kernel: self.kernel.clone(),
            n: ns[0],
            trials,
            seed: self.seed,
            j_set,
            tau: self.tau,
            r_trunc: self.r_trunc,
            functions: self.functions.clone(),
            gap_tol: self.gap_tol,
            cluster_rank: self.cluster_rank,
            limit_draws: self.limit_draws,
        };
        for &n in &ns {
            let mut c = cfg.clone();
            c.n = n;
            c.validate()?;
        }
        Ok((cfg, ns))
    }
}

fn default_m_f() -> f64 {
    1.0
}

/// Input of `bounds`: a kernel or explicit `(κ, λ_max)`, plus an optional index set or gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Index set of the kernel's reference spectrum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_set: Option<Vec<usize>>,
    /// Explicit gap structure, used when no kernel index set is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_j: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_clusters: Option<usize>,
    /// `M_F`, the largest RKHS norm of the function class.
    #[serde(default = "default_m_f")]
    pub m_f: f64,
}
