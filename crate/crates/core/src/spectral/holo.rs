use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Entire functions usable in the spectral calculus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "arg")]
pub enum HoloFunction {
    /// `f ≡ 1`
    One,
    /// `f(z) = z`
    Identity,
    /// `f(z) = z^p`
    Power(u32),
    Exp,
    /// `f(z) = Σ c_i z^i`, coefficients in ascending degree.
    Polynomial(Vec<f64>),
}

impl HoloFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            HoloFunction::One => 1.0,
            HoloFunction::Identity => x,
            HoloFunction::Power(p) => x.powi(*p as i32),
            HoloFunction::Exp => x.exp(),
            HoloFunction::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            HoloFunction::One => 0.0,
            HoloFunction::Identity => 1.0,
            HoloFunction::Power(0) => 0.0,
            HoloFunction::Power(p) => *p as f64 * x.powi(*p as i32 - 1),
            HoloFunction::Exp => x.exp(),
            HoloFunction::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (i, &ci)| acc * x + i as f64 * ci),
        }
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        match self {
            HoloFunction::One => Complex64::new(1.0, 0.0),
            HoloFunction::Identity => z,
            HoloFunction::Power(p) => z.powu(*p),
            HoloFunction::Exp => z.exp(),
            HoloFunction::Polynomial(c) => c
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci),
        }
    }

    pub fn derivative_complex(&self, z: Complex64) -> Complex64 {
        match self {
            HoloFunction::One => Complex64::new(0.0, 0.0),
            HoloFunction::Identity => Complex64::new(1.0, 0.0),
            HoloFunction::Power(0) => Complex64::new(0.0, 0.0),
            HoloFunction::Power(p) => *p as f64 * z.powu(p - 1),
            HoloFunction::Exp => z.exp(),
            HoloFunction::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (i, &ci)| {
                    acc * z + i as f64 * ci
                }),
        }
    }

    /// `(f(b) − f(a)) / (b − a)`, falling back to `f′(a)` when the points coincide.
    pub fn divided_difference(&self, a: f64, b: f64) -> f64 {
        if a == b {
            self.derivative(a)
        } else {
            (self.eval(b) - self.eval(a)) / (b - a)
        }
    }
}
