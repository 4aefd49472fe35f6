use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::config::{BoundsConfig, ExpandConfig, KernelStudyConfig};
use crate::cli::provenance::Provenance;
use crate::error::{Error, Result};
use crate::kernel::{
    bernstein_constants, bernstein_radius, clustered_eigen_bound, min_sample_size,
    separated_eigen_bound, xi_value, BernsteinConstants, KernelModel,
};
use crate::linalg::eigh;
use crate::montecarlo::{run_sweep, McReport};
use crate::perturbation::{
    eigval_expansion_clustered, eigval_expansion_separated, projection_expansion,
};
use crate::spectral::build_index_set;

/// Exit codes of the `spectra` binary.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INPUT_ERROR: i32 = 1;
    pub const CONDITION_VIOLATED: i32 = 2;
}

/// Outcome of a command: the exit code and the files it wrote.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub files: Vec<std::path::PathBuf>,
}

fn with_provenance<T: Serialize>(prov: &Provenance, body: &T) -> Result<String> {
    let mut v = json!({ "provenance": prov });
    match serde_json::to_value(body)? {
        Value::Object(map) => {
            let obj = v.as_object_mut().expect("object");
            for (k, x) in map {
                obj.insert(k, x);
            }
        }
        other => {
            v["body"] = other;
        }
    }
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn write(out: &Path, name: &str, text: &str, files: &mut Vec<std::path::PathBuf>) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    let path = out.join(name);
    fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    files.push(path);
    Ok(())
}

/// Expansion reports for the projection, separated-eigenvalue and clustered-eigenvalue
/// regimes, one JSON file each.
pub fn cmd_expand(cfg: &ExpandConfig, base: &Path, out: &Path) -> Result<Outcome> {
    let input = cfg.load(base)?;
    let spec = eigh(&input.h)?;
    let info = build_index_set(&spec, &input.j_set)?;
    let reports = [
        ("projection.json", projection_expansion(&spec, &input.h_hat, &info)?),
        ("separated.json", eigval_expansion_separated(&spec, &input.h_hat, &info)?),
        ("clustered.json", eigval_expansion_clustered(&spec, &input.h_hat, &info)?),
    ];
    let prov = Provenance::new("expand", cfg, 0);
    let mut files = Vec::new();
    for (name, r) in &reports {
        write(out, name, &with_provenance(&prov, r)?, &mut files)?;
    }
    let ok = reports.iter().all(|(_, r)| r.condition_ok);
    Ok(Outcome {
        code: if ok { exit::SUCCESS } else { exit::CONDITION_VIOLATED },
        files,
    })
}

#[derive(Serialize)]
struct SweepEntry<'a> {
    n: usize,
    summary: &'a crate::montecarlo::Summary,
}

/// Runs a Monte Carlo study and writes `<study>.csv` and `<study>_summary.json`.
pub fn cmd_kernel_study(cfg: &KernelStudyConfig, out: &Path) -> Result<Outcome> {
    let (mc, ns) = cfg.to_mc()?;
    let sweep = run_sweep(&mc, cfg.study, &ns)?;
    let prov = Provenance::new("kernel-study", cfg, cfg.seed);
    let name = cfg.study.name();

    let mut combined: McReport = sweep.reports[0].clone();
    combined.records = sweep
        .reports
        .iter()
        .flat_map(|r| r.records.iter().cloned())
        .collect();
    let csv = combined.to_csv(&prov.header())?;

    let body = if ns.len() == 1 {
        json!({
            "study": cfg.study,
            "config": cfg,
            "summary": sweep.reports[0].summary,
        })
    } else {
        let entries: Vec<SweepEntry> = sweep
            .reports
            .iter()
            .map(|r| SweepEntry {
                n: r.config.n,
                summary: &r.summary,
            })
            .collect();
        json!({
            "study": cfg.study,
            "config": cfg,
            "sweep": entries,
            "slopes": sweep.slopes,
        })
    };
    let mut files = Vec::new();
    write(out, &format!("{name}.csv"), &csv, &mut files)?;
    write(out, &format!("{name}_summary.json"), &with_provenance(&prov, &body)?, &mut files)?;
    Ok(Outcome {
        code: exit::SUCCESS,
        files,
    })
}

/// Concentration constants and the bound values they produce.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    #[serde(flatten)]
    pub constants: BernsteinConstants,
    pub n: usize,
    pub tau: f64,
    /// `√(σ/n) + r/(3n)`.
    pub threshold: f64,
    pub radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_clusters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    /// Smallest `n` with `√(σ/n) + r/(3n) ≤ γ_J/4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_ok: Option<bool>,
    /// Eigenvalue bounds at this radius, when a kernel index set is given.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub eigen_bounds: BTreeMap<String, f64>,
}

pub fn bounds_report(cfg: &BoundsConfig) -> Result<BoundsReport> {
    if !(cfg.tau > 0.0 && cfg.tau < 1.0) {
        return Err(Error::BadTau(cfg.tau));
    }
    let n = cfg.n.ok_or_else(|| Error::ConfigInvalid("missing \"n\"".into()))?;
    if n == 0 {
        return Err(Error::ConfigInvalid("n must be at least 1".into()));
    }
    let model = cfg.kernel.as_ref().map(KernelModel::from_spec).transpose()?;
    let constants = match (&model, cfg.kappa, cfg.lambda_max) {
        (Some(m), None, None) => bernstein_constants(m)?,
        (None, Some(k), Some(l)) => BernsteinConstants::new(k, l)?,
        (None, _, _) => {
            return Err(Error::ConfigInvalid(
                "give a \"kernel\" or both \"kappa\" and \"lambda_max\"".into(),
            ))
        }
        (Some(_), _, _) => {
            return Err(Error::ConfigInvalid(
                "\"kappa\"/\"lambda_max\" cannot be combined with \"kernel\"".into(),
            ))
        }
    };
    let radius = bernstein_radius(&constants, n, cfg.tau)?;
    let threshold = constants.threshold(n);
    let mut report = BoundsReport {
        constants,
        n,
        tau: cfg.tau,
        threshold,
        radius,
        gamma_j: None,
        theta_max: None,
        k_clusters: None,
        m_f: None,
        xi: None,
        min_n: None,
        condition_ok: None,
        eigen_bounds: BTreeMap::new(),
    };

    let gap = match (&cfg.j_set, &model) {
        (Some(j), Some(m)) => {
            if cfg.gamma_j.is_some() || cfg.theta_max.is_some() || cfg.k_clusters.is_some() {
                return Err(Error::ConfigInvalid(
                    "\"j_set\" determines the gap; drop \"gamma_j\", \"theta_max\", \"k_clusters\"".into(),
                ));
            }
            let info = m.index_set(j)?;
            report
                .eigen_bounds
                .insert("separated".into(), separated_eigen_bound(&info, radius));
            report
                .eigen_bounds
                .insert("clustered".into(), clustered_eigen_bound(&info, radius));
            Some((info.gamma_j, info.theta_max(), info.k_clusters))
        }
        (Some(_), None) => {
            return Err(Error::ConfigInvalid("\"j_set\" requires a \"kernel\"".into()))
        }
        (None, _) => match cfg.gamma_j {
            Some(g) => {
                if !(g > 0.0) {
                    return Err(Error::ConfigInvalid(format!("gamma_j must be positive, got {g}")));
                }
                let k = cfg.k_clusters.unwrap_or(1);
                if k == 0 {
                    return Err(Error::ConfigInvalid("k_clusters must be at least 1".into()));
                }
                Some((g, cfg.theta_max.unwrap_or(0.0), k))
            }
            None => None,
        },
    };
    if let Some((g, theta, k)) = gap {
        if !(cfg.m_f >= 0.0 && cfg.m_f.is_finite()) {
            return Err(Error::ConfigInvalid(format!("m_f must be non-negative, got {}", cfg.m_f)));
        }
        let level = g / 4.0;
        report.gamma_j = Some(g);
        report.theta_max = Some(theta);
        report.k_clusters = Some(k);
        report.m_f = Some(cfg.m_f);
        report.xi = Some(xi_value(cfg.m_f, k, g, theta, radius));
        report.min_n = min_sample_size(&constants, level);
        report.condition_ok = Some(threshold <= level);
    }
    Ok(report)
}

/// Prints the bounds JSON and writes `bounds.json` when an output directory is given.
pub fn cmd_bounds(cfg: &BoundsConfig, out: Option<&Path>) -> Result<(Outcome, String)> {
    let report = bounds_report(cfg)?;
    let prov = Provenance::new("bounds", cfg, 0);
    let text = with_provenance(&prov, &report)?;
    let mut files = Vec::new();
    if let Some(dir) = out {
        write(dir, "bounds.json", &text, &mut files)?;
    }
    let code = if report.condition_ok == Some(false) {
        exit::CONDITION_VIOLATED
    } else {
        exit::SUCCESS
    };
    Ok((Outcome { code, files }, text))
}
