use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Spectrum, SymmetricMatrix};
use crate::spectral::{HoloFunction, IndexSetInfo};

pub const DEFAULT_CONTOUR_NODES: usize = 256;
pub const MIN_CONTOUR_NODES: usize = 32;
pub const MIN_CAUCHY_NODES: usize = 64;

/// Dense complex square matrix, row-major.
#[derive(Clone)]
struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    fn shifted(z: Complex64, h: &Matrix) -> Self {
        let n = h.rows();
        let mut data: Vec<Complex64> = h.as_slice().iter().map(|&x| Complex64::new(-x, 0.0)).collect();
        for i in 0..n {
            data[i * n + i] += z;
        }
        CMatrix { n, data }
    }

    /// Inverse by LU with partial pivoting.
    fn inverse(mut self) -> Option<CMatrix> {
        let n = self.n;
        let mut inv = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            inv[i * n + i] = Complex64::new(1.0, 0.0);
        }
        let a = &mut self.data;
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))?;
            if a[piv * n + col].norm() == 0.0 {
                return None;
            }
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                    inv.swap(piv * n + k, col * n + k);
                }
            }
            let d = a[col * n + col].inv();
            for k in 0..n {
                a[col * n + k] *= d;
                inv[col * n + k] *= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor.norm() == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let ak = a[col * n + k];
                    let ik = inv[col * n + k];
                    a[r * n + k] -= factor * ak;
                    inv[r * n + k] -= factor * ik;
                }
            }
        }
        Some(CMatrix { n, data: inv })
    }

    fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    out[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        CMatrix { n, data: out }
    }

    fn from_real(m: &Matrix) -> CMatrix {
        CMatrix {
            n: m.rows(),
            data: m.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }
}

/// Circle centers and the common radius `γ_J/2`, checking that disks are disjoint.
fn circles(info: &IndexSetInfo) -> Result<(Vec<f64>, f64)> {
    if !info.gamma_j.is_finite() {
        return Err(Error::UnboundedContour);
    }
    for a in 0..info.thetas.len() {
        for b in (a + 1)..info.thetas.len() {
            let distance = (info.thetas[a] - info.thetas[b]).abs();
            if distance < info.gamma_j {
                return Err(Error::OverlappingDisks {
                    a: info.thetas[a],
                    b: info.thetas[b],
                    distance,
                    gap: info.gamma_j,
                });
            }
        }
    }
    Ok((info.thetas.clone(), info.gamma_j / 2.0))
}

/// Visits each trapezoid node with `(z, weight)`, weight being `dz/(2πi)` for the node.
fn for_each_node(
    centers: &[f64],
    radius: f64,
    nodes: usize,
    mut visit: impl FnMut(Complex64, Complex64),
) {
    for &c in centers {
        for m in 0..nodes {
            let phase = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / nodes as f64);
            let z = Complex64::new(c, 0.0) + radius * phase;
            visit(z, radius * phase / nodes as f64);
        }
    }
}

fn real_part_symmetric(acc: &CMatrix) -> Result<SymmetricMatrix> {
    let n = acc.n;
    SymmetricMatrix::new(Matrix::from_fn(n, n, |i, j| acc.data[i * n + j].re))
}

/// Dunford–Taylor quadrature of `(1/2πi)∮ f(z)(zI − H)⁻¹ dz` over circles of radius `γ_J/2`
/// around each cluster value. Agrees with [`crate::spectral::compress`] up to quadrature error.
pub fn contour_compress(
    spec: &Spectrum,
    f: &HoloFunction,
    info: &IndexSetInfo,
    nodes_per_circle: usize,
) -> Result<SymmetricMatrix> {
    if nodes_per_circle < MIN_CONTOUR_NODES {
        return Err(Error::TooFewNodes {
            got: nodes_per_circle,
            min: MIN_CONTOUR_NODES,
        });
    }
    let (centers, radius) = circles(info)?;
    let h = spec.reconstruct().into_matrix();
    let n = h.rows();
    let mut acc = CMatrix {
        n,
        data: vec![Complex64::new(0.0, 0.0); n * n],
    };
    let mut failed = None;
    for_each_node(&centers, radius, nodes_per_circle, |z, w| {
        match CMatrix::shifted(z, &h).inverse() {
            Some(r) => {
                let s = f.eval_complex(z) * w;
                for (a, x) in acc.data.iter_mut().zip(&r.data) {
                    *a += s * x;
                }
            }
            None => failed = Some(z),
        }
    });
    if let Some(z) = failed {
        return Err(Error::PoleOnContour {
            pole: format!("{z}"),
        });
    }
    real_part_symmetric(&acc)
}

/// Quadrature of `(1/2πi)∮ f(z) R_z (Ĥ − H) R_z dz`, the integral form of the first-order term.
pub fn contour_grad_compress(
    spec_h: &Spectrum,
    h_hat: &SymmetricMatrix,
    f: &HoloFunction,
    info: &IndexSetInfo,
    nodes_per_circle: usize,
) -> Result<SymmetricMatrix> {
    if nodes_per_circle < MIN_CONTOUR_NODES {
        return Err(Error::TooFewNodes {
            got: nodes_per_circle,
            min: MIN_CONTOUR_NODES,
        });
    }
    let (centers, radius) = circles(info)?;
    let h = spec_h.reconstruct().into_matrix();
    let delta = CMatrix::from_real(&h_hat.matrix().sub(&h));
    let n = h.rows();
    let mut acc = CMatrix {
        n,
        data: vec![Complex64::new(0.0, 0.0); n * n],
    };
    let mut failed = None;
    for_each_node(&centers, radius, nodes_per_circle, |z, w| {
        match CMatrix::shifted(z, &h).inverse() {
            Some(r) => {
                let term = r.matmul(&delta).matmul(&r);
                let s = f.eval_complex(z) * w;
                for (a, x) in acc.data.iter_mut().zip(&term.data) {
                    *a += s * x;
                }
            }
            None => failed = Some(z),
        }
    });
    if let Some(z) = failed {
        return Err(Error::PoleOnContour {
            pole: format!("{z}"),
        });
    }
    real_part_symmetric(&acc)
}

/// Trapezoid value of `(1/2πi)∮ f(z)/((z−a)(z−b)) dz` over `|z − center| = radius`.
pub fn cauchy_integral(
    a: Complex64,
    b: Complex64,
    f: &HoloFunction,
    center: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<Complex64> {
    if nodes < MIN_CAUCHY_NODES {
        return Err(Error::TooFewNodes {
            got: nodes,
            min: MIN_CAUCHY_NODES,
        });
    }
    let on_circle = |p: Complex64| ((p - center).norm() - radius).abs() <= 1e-12 * radius.max(1.0);
    for p in [a, b] {
        if on_circle(p) {
            return Err(Error::PoleOnContour {
                pole: format!("{p}"),
            });
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..nodes {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / nodes as f64);
        let z = center + radius * phase;
        sum += f.eval_complex(z) / ((z - a) * (z - b)) * radius * phase;
    }
    Ok(sum / nodes as f64)
}

/// Closed-form value of the same integral by residues.
pub fn cauchy_residue(
    a: Complex64,
    b: Complex64,
    f: &HoloFunction,
    center: Complex64,
    radius: f64,
) -> Complex64 {
    let a_in = (a - center).norm() < radius;
    let b_in = (b - center).norm() < radius;
    match (a_in, b_in) {
        (true, true) if a == b => f.derivative_complex(a),
        (true, true) => (f.eval_complex(b) - f.eval_complex(a)) / (b - a),
        (true, false) => f.eval_complex(a) / (a - b),
        (false, true) => f.eval_complex(b) / (b - a),
        (false, false) => Complex64::new(0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigh;
    use crate::spectral::{build_index_set, compress};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn diagonal_projection_by_contour() {
        let s = eigh(&SymmetricMatrix::from_diag(&[3.0, 2.0, 2.0, 1.0]).unwrap()).unwrap();
        let info = build_index_set(&s, &[2, 3]).unwrap();
        for (f, d) in [
            (HoloFunction::One, [0.0, 1.0, 1.0, 0.0]),
            (HoloFunction::Identity, [0.0, 2.0, 2.0, 0.0]),
        ] {
            let got = contour_compress(&s, &f, &info, 256).unwrap();
            let want = Matrix::from_diag(&d);
            assert!(got.matrix().sub(&want).max_abs() < 1e-10);
        }
    }

    #[test]
    fn contour_matches_spectral_for_exp() {
        let s = eigh(&SymmetricMatrix::from_diag(&[1.0, 0.4, -0.3]).unwrap()).unwrap();
        let info = build_index_set(&s, &[1]).unwrap();
        let got = contour_compress(&s, &HoloFunction::Exp, &info, 512).unwrap();
        let want = compress(&s, &HoloFunction::Exp, &info);
        assert!(got.matrix().sub(want.matrix()).fro_norm() < 1e-8);
    }

    #[test]
    fn contour_errors() {
        let s = eigh(&SymmetricMatrix::from_diag(&[3.0, 2.9, 1.0]).unwrap()).unwrap();
        let info = build_index_set(&s, &[1, 2]).unwrap();
        assert!(matches!(
            contour_compress(&s, &HoloFunction::One, &info, 64),
            Err(Error::OverlappingDisks { .. })
        ));
        let all = build_index_set(&s, &[1, 2, 3]).unwrap();
        assert_eq!(
            contour_compress(&s, &HoloFunction::One, &all, 64).unwrap_err(),
            Error::UnboundedContour
        );
        let one = build_index_set(&s, &[3]).unwrap();
        assert!(matches!(
            contour_compress(&s, &HoloFunction::One, &one, 8),
            Err(Error::TooFewNodes { got: 8, min: 32 })
        ));
    }

    #[test]
    fn residue_examples() {
        let o = c(0.0);
        let v = cauchy_integral(o, o, &HoloFunction::Power(2), o, 1.0, 128).unwrap();
        assert!(v.norm() < 1e-8);
        let v = cauchy_integral(c(0.2), c(0.5), &HoloFunction::Identity, o, 1.0, 128).unwrap();
        assert!((v - c(1.0)).norm() < 1e-8);
        let v = cauchy_integral(c(0.2), c(3.0), &HoloFunction::One, o, 1.0, 128).unwrap();
        assert!((v - c(1.0 / (0.2 - 3.0))).norm() < 1e-8);
        assert!((v.re + 0.357143).abs() < 1e-6);
        assert!(matches!(
            cauchy_integral(c(1.0), c(0.0), &HoloFunction::One, o, 1.0, 128),
            Err(Error::PoleOnContour { .. })
        ));
    }
}
