use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

/// Node count of the shared Gauss–Legendre rule.
pub const QUADRATURE_NODES: usize = 2048;

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct UnitQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl UnitQuadrature {
    pub fn new(n: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).expect("nonzero"));
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .unzip();
        UnitQuadrature { nodes, weights }
    }

    /// `∫₀¹ f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// `∫ₐᵇ f`.
    pub fn integrate_on(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(a + len * x))
            .sum::<f64>()
            * len
    }
}

/// The shared 2048-node rule, built once.
pub fn unit_quadrature() -> &'static UnitQuadrature {
    static RULE: OnceLock<UnitQuadrature> = OnceLock::new();
    RULE.get_or_init(|| UnitQuadrature::new(QUADRATURE_NODES))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let q = unit_quadrature();
        assert!((q.integrate(|x| x.powi(7)) - 0.125).abs() < 1e-14);
        assert!((q.integrate(|x| (std::f64::consts::PI * x).sin()) - 2.0 / std::f64::consts::PI).abs() < 1e-14);
        assert!((q.integrate_on(0.25, 0.5, |x| x) - 0.09375).abs() < 1e-15);
        assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }
}
