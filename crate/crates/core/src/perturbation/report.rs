use serde::Serialize;

use crate::linalg::Matrix;

/// Which first-order expansion a report belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `P̂_J ≈ P_J + Ŝ_J`.
    Projection,
    /// `Ĥ P̂_J ≈ H P_J + Â_J`.
    Canonical,
    /// Eigenvalue shifts of well-separated clusters.
    Separated,
    /// Sum of eigenvalue shifts over the whole index set.
    Clustered,
}

/// Predicted or observed quantity of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Matrix(Vec<Vec<f64>>),
    Vector(Vec<f64>),
    Scalar(f64),
}

impl Quantity {
    pub fn from_matrix(m: &Matrix) -> Self {
        Quantity::Matrix(m.to_rows())
    }

    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Quantity::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Quantity::Scalar(x) => Some(*x),
            _ => None,
        }
    }
}

/// Outcome of comparing a first-order prediction with the exact perturbed quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub regime: Regime,
    /// `‖Ĥ − H‖_op` over the governing gap (the largest per-cluster ratio when separated).
    pub ratio: f64,
    pub condition_ok: bool,
    pub remainder: f64,
    pub bound: f64,
    pub predicted: Quantity,
    pub actual: Quantity,
    /// `‖Ĥ − H‖_op`.
    pub perturbation_norm: f64,
    /// Per-cluster ratios `‖Ĥ − H‖_op / γ_{J_j}`; filled for the separated regime.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cluster_ratios: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cluster_condition_ok: Vec<bool>,
}

impl ExpansionReport {
    /// The remainder respects the bound, with relative slack `1e-10`.
    pub fn within_bound(&self) -> bool {
        self.remainder <= self.bound + 1e-10 * self.bound.max(1.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
