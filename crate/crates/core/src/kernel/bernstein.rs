use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::model::KernelModel;
use crate::spectral::IndexSetInfo;

/// Grid size used to locate `sup_x h(x, x)`.
pub const KAPPA_GRID: usize = 4096;

/// Constants of the Bernstein-type bound for `‖Ĥ_n − H‖_{op,H}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernsteinConstants {
    /// `sup_x h(x, x)`.
    pub kappa: f64,
    pub lambda_max: f64,
    /// `κ + λ_max`.
    pub r: f64,
    /// `κ λ_max`.
    pub sigma: f64,
    /// `κ / λ_max`.
    pub d: f64,
}

impl BernsteinConstants {
    pub fn new(kappa: f64, lambda_max: f64) -> Result<Self> {
        if !(lambda_max > 0.0) || !lambda_max.is_finite() {
            return Err(Error::DegenerateKernel(lambda_max));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::ConfigInvalid(format!("kappa must be positive, got {kappa}")));
        }
        Ok(BernsteinConstants {
            kappa,
            lambda_max,
            r: kappa + lambda_max,
            sigma: kappa * lambda_max,
            d: kappa / lambda_max,
        })
    }

    /// `√(σ/n) + r/(3n)`, the smallest deviation level the tail bound covers.
    pub fn threshold(&self, n: usize) -> f64 {
        let n = n as f64;
        (self.sigma / n).sqrt() + self.r / (3.0 * n)
    }
}

/// Constants for a kernel, with `κ` maximised over the grid `i/4095`.
pub fn bernstein_constants(model: &KernelModel) -> Result<BernsteinConstants> {
    let last = (KAPPA_GRID - 1) as f64;
    let kappa = (0..KAPPA_GRID)
        .map(|i| {
            let x = i as f64 / last;
            model.eval(x, x)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    BernsteinConstants::new(kappa, model.lambda_max())
}

/// `min(1, 4d exp(−3nt²/(6σ + 2rt)))`, valid for `t ≥ √(σ/n) + r/(3n)`.
pub fn bernstein_tail(c: &BernsteinConstants, n: usize, t: f64) -> Result<f64> {
    let t0 = c.threshold(n);
    if !(t >= t0) {
        return Err(Error::ConditionViolated {
            message: format!("deviation level {t} is below the admissible threshold {t0}"),
            required_n: None,
        });
    }
    let n = n as f64;
    let v = 4.0 * c.d * (-3.0 * n * t * t / (6.0 * c.sigma + 2.0 * c.r * t)).exp();
    Ok(v.min(1.0))
}

/// Deviation level exceeded with probability at most `τ`:
/// `√(2σ log(4d/τ)/n) + 2r log(4d/τ)/(3n)`.
pub fn bernstein_radius(c: &BernsteinConstants, n: usize, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::BadTau(tau));
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let n = n as f64;
    let l = (4.0 * c.d / tau).ln();
    Ok((2.0 * c.sigma * l / n).sqrt() + 2.0 * c.r * l / (3.0 * n))
}

/// Smallest `n` with `√(σ/n) + r/(3n) ≤ level`, or `None` when `level` is not positive.
pub fn min_sample_size(c: &BernsteinConstants, level: f64) -> Option<usize> {
    if level.is_infinite() {
        return Some(1);
    }
    if !(level > 0.0) {
        return None;
    }
    // In u = 1/√n the condition reads (r/3) u² + √σ u − level ≤ 0.
    let a = c.r / 3.0;
    let b = c.sigma.sqrt();
    let u = (-b + (b * b + 4.0 * a * level).sqrt()) / (2.0 * a);
    let mut n = (1.0 / (u * u)).ceil().max(1.0) as usize;
    while n > 1 && c.threshold(n - 1) <= level {
        n -= 1;
    }
    while c.threshold(n) > level {
        n += 1;
    }
    Some(n)
}

/// `4 M² K (γ_J + 2θ_max) / γ_J² · radius²`.
pub fn xi_value(m_f: f64, k_clusters: usize, gamma_j: f64, theta_max: f64, radius: f64) -> f64 {
    if m_f == 0.0 || gamma_j.is_infinite() {
        return 0.0;
    }
    4.0 * m_f * m_f * k_clusters as f64 * (gamma_j + 2.0 * theta_max) / (gamma_j * gamma_j)
        * radius
        * radius
}

/// [`xi_value`] for an index set.
pub fn xi_from_radius(info: &IndexSetInfo, m_f: f64, radius: f64) -> f64 {
    xi_value(m_f, info.k_clusters, info.gamma_j, info.theta_max(), radius)
}

/// Bilinear-form deviation bound `ξ`, requiring `√(σ/n) + r/(3n) ≤ γ_J/4`.
pub fn xi_bound(
    info: &IndexSetInfo,
    m_f: f64,
    c: &BernsteinConstants,
    n: usize,
    tau: f64,
) -> Result<f64> {
    let radius = bernstein_radius(c, n, tau)?;
    let level = info.gamma_j / 4.0;
    if c.threshold(n) > level {
        return Err(Error::ConditionViolated {
            message: format!(
                "sqrt(sigma/n) + r/(3n) = {} exceeds gamma_J/4 = {level} at n = {n}",
                c.threshold(n)
            ),
            required_n: min_sample_size(c, level),
        });
    }
    Ok(xi_from_radius(info, m_f, radius))
}

/// Deviation level the sample-size condition is compared with, per eigenvalue regime.
pub fn separated_level(info: &IndexSetInfo) -> f64 {
    info.gamma_jj.iter().cloned().fold(f64::INFINITY, f64::min) / 4.0
}

pub fn clustered_level(info: &IndexSetInfo) -> f64 {
    info.gamma_j / (4.0 * (info.k_clusters as f64).sqrt())
}

/// Bound on `‖(λ̂_k − λ_k)_{k∈J} − ⊕_j spec↓(θ_j (P_n−P)(φ_kφ_ℓ))‖₂` at a deviation radius.
///
/// The per-cluster weight is `|J_j| (11γ_j + 32θ_j)² / (4γ_j⁴)`, obtained by substituting
/// `‖Ĥ_n − H‖ ≤ radius` in the matrix bound.
pub fn separated_eigen_bound(info: &IndexSetInfo, radius: f64) -> f64 {
    let s: f64 = info
        .clusters
        .iter()
        .zip(&info.thetas)
        .zip(&info.gamma_jj)
        .map(|((c, &th), &g)| {
            if g.is_infinite() {
                0.0
            } else {
                c.len() as f64 * (11.0 * g + 32.0 * th).powi(2) / (4.0 * g.powi(4))
            }
        })
        .sum();
    s.sqrt() * radius * radius
}

/// Bound on `|Σ_{k∈J}(λ̂_k − λ_k) − (P_n−P)(Σ_{k∈J} λ_kφ_k²)|` at a deviation radius.
pub fn clustered_eigen_bound(info: &IndexSetInfo, radius: f64) -> f64 {
    let g = info.gamma_j;
    if g.is_infinite() {
        return 0.0;
    }
    let k = info.k_clusters as f64;
    let j = info.j_set.len() as f64;
    k * j.sqrt() * (3.0 / (2.0 * g * k.sqrt()) + 4.0 / g + 14.0 * info.theta_max() / (g * g))
        * radius
        * radius
}

/// `Σ_j 4d exp(−3nγ_j²/(96σ + 8rγ_j))`, the extra failure probability of the separated bound.
pub fn separated_failure_budget(info: &IndexSetInfo, c: &BernsteinConstants, n: usize) -> f64 {
    let n = n as f64;
    info.gamma_jj
        .iter()
        .filter(|g| g.is_finite())
        .map(|&g| 4.0 * c.d * (-3.0 * n * g * g / (96.0 * c.sigma + 8.0 * c.r * g)).exp())
        .sum()
}

/// `4d exp(−3nγ_J²/(96Kσ + 8√K rγ_J))`, the extra failure probability of the clustered bound.
pub fn clustered_failure_budget(info: &IndexSetInfo, c: &BernsteinConstants, n: usize) -> f64 {
    let g = info.gamma_j;
    if g.is_infinite() {
        return 0.0;
    }
    let n = n as f64;
    let k = info.k_clusters as f64;
    4.0 * c.d * (-3.0 * n * g * g / (96.0 * k * c.sigma + 8.0 * k.sqrt() * c.r * g)).exp()
}
