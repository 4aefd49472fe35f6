use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::montecarlo::config::{McConfig, StudyKind};

/// Fixed leading CSV columns; study-specific columns follow.
pub const CSV_COLUMNS: [&str; 7] = [
    "trial",
    "n",
    "condition_ok",
    "residual",
    "bound",
    "covered",
    "opnorm_dev",
];

/// One trial of a study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub n: usize,
    pub condition_ok: bool,
    pub residual: f64,
    /// Absent for studies without a bound (weak limits).
    pub bound: Option<f64>,
    pub covered: Option<bool>,
    /// `‖Ĥ_n − H‖_{op,H}` in the retained coordinates.
    pub opnorm_dev: f64,
    /// Values for [`McReport::extra_columns`].
    pub extra: Vec<f64>,
}

/// Empirical exceedance of one deviation level next to the tail bound there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailCheck {
    pub t: f64,
    pub exceedance: f64,
    pub tail_bound: f64,
}

/// Aggregates of a study. Every field is a deterministic function of the records.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    /// Fraction of condition-ok trials whose residual is within the bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
    pub condition_ok_trials: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub coverage_by_regime: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceedance: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tail_checks: Vec<TailCheck>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub ks: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    /// Coverage restricted to trials where the estimated index set equals `J`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub conditional_coverage: BTreeMap<String, f64>,
    /// Bound values, radii, limit variances and failure budgets used by the study.
    pub constants: BTreeMap<String, f64>,
    pub median_residual: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub slopes: BTreeMap<String, f64>,
}

/// Per-trial records and aggregates of one study run.
#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub study: StudyKind,
    pub config: McConfig,
    pub extra_columns: Vec<String>,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

impl McReport {
    /// Column values of an extra column, by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.extra_columns.iter().position(|c| c == name)?;
        Some(self.records.iter().map(|r| r.extra[i]).collect())
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.residual).collect()
    }

    /// CSV text with `# key=value` header lines followed by one row per trial.
    pub fn to_csv(&self, header: &[(String, String)]) -> Result<String> {
        let mut out = String::new();
        for (k, v) in header {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut cols: Vec<&str> = CSV_COLUMNS.to_vec();
        cols.extend(self.extra_columns.iter().map(String::as_str));
        w.write_record(&cols).map_err(|e| Error::Io(e.to_string()))?;
        for r in &self.records {
            let mut row = vec![
                r.trial.to_string(),
                r.n.to_string(),
                r.condition_ok.to_string(),
                fmt_f64(r.residual),
                r.bound.map(fmt_f64).unwrap_or_default(),
                r.covered.map(|c| c.to_string()).unwrap_or_default(),
                fmt_f64(r.opnorm_dev),
            ];
            row.extend(r.extra.iter().map(|v| fmt_f64(*v)));
            w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }
}

/// Fraction of `true` values; `None` when empty.
pub fn rate(flags: impl IntoIterator<Item = bool>) -> Option<f64> {
    let (mut hit, mut total) = (0usize, 0usize);
    for f in flags {
        total += 1;
        hit += usize::from(f);
    }
    (total > 0).then(|| hit as f64 / total as f64)
}
