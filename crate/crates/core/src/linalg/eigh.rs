use crate::error::{Error, Result};
use crate::linalg::matrix::{Matrix, SymmetricMatrix};

/// A rotation is skipped once `|a_pq| ≤ tol·√|a_pp a_qq|`; sweeps stop when none is applied.
pub const JACOBI_REL_TOL: f64 = 1e-15;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V diag(λ) Vᵀ` with eigenvalues in non-increasing order.
///
/// Column `k` of `eigenvectors` is the unit eigenvector for `eigenvalues[k]`; its entry of
/// largest magnitude (first one on ties) is non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvector at 0-based position `k`.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        self.weighted_sum(&(0..self.dim()).collect::<Vec<_>>(), |_, lam| lam)
    }

    /// `Σ_{k ∈ positions} w(k, λ_k) ψ_k ψ_kᵀ` for 0-based positions.
    pub fn weighted_sum(
        &self,
        positions: &[usize],
        weight: impl Fn(usize, f64) -> f64,
    ) -> SymmetricMatrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for &k in positions {
            let w = weight(k, self.eigenvalues[k]);
            if w == 0.0 {
                continue;
            }
            let v = self.vector(k);
            for i in 0..n {
                let vi = w * v[i];
                for j in 0..n {
                    out[(i, j)] += vi * v[j];
                }
            }
        }
        SymmetricMatrix::new(out).expect("finite weighted sum of eigenprojections")
    }

    /// Coordinates of a matrix in this eigenbasis: `Vᵀ M V`.
    pub fn to_eigenbasis(&self, m: &Matrix) -> Matrix {
        self.eigenvectors
            .transpose()
            .matmul(m)
            .matmul(&self.eigenvectors)
    }

    /// Inverse of [`Spectrum::to_eigenbasis`]: `V C Vᵀ`.
    pub fn from_eigenbasis(&self, c: &Matrix) -> Matrix {
        self.eigenvectors
            .matmul(c)
            .matmul(&self.eigenvectors.transpose())
    }
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations.
pub fn eigh(a: &SymmetricMatrix) -> Result<Spectrum> {
    let n = a.dim();
    let src = a.matrix();
    for i in 0..n {
        for j in 0..n {
            if !src[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }

    let mut w = src.as_slice().to_vec();
    // Rows of `vt` are the (unsorted) eigenvectors.
    let mut vt = Matrix::identity(n).as_slice().to_vec();

    let norm = src.fro_norm();
    // Pairs below the relative threshold are left alone, which keeps small eigenvalues of
    // definite matrices relatively accurate. The floor guarantees termination near zero.
    let floor = 1e-30 * norm;

    let off_norm = |w: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += w[i * n + j] * w[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_norm(&w),
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[p * n + q];
                let app = w[p * n + p];
                let aqq = w[q * n + q];
                if apq.abs() <= (JACOBI_REL_TOL * (app * aqq).abs().sqrt()).max(floor) {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = w[k * n + p];
                    let akq = w[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    w[k * n + p] = new_kp;
                    w[p * n + k] = new_kp;
                    w[k * n + q] = new_kq;
                    w[q * n + k] = new_kq;
                }
                w[p * n + p] = app - t * apq;
                w[q * n + q] = aqq + t * apq;
                w[p * n + q] = 0.0;
                w[q * n + p] = 0.0;

                let (head, tail) = vt.split_at_mut(q * n);
                let row_p = &mut head[p * n..(p + 1) * n];
                let row_q = &mut tail[..n];
                for (vp, vq) in row_p.iter_mut().zip(row_q.iter_mut()) {
                    let a = *vp;
                    let b = *vq;
                    *vp = c * a - s * b;
                    *vq = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| w[i * n + i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal eigenvalues keep ascending pre-sort index.
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (k, &src_idx) in order.iter().enumerate() {
        let row = &vt[src_idx * n..(src_idx + 1) * n];
        let mut lead = 0;
        for (i, x) in row.iter().enumerate() {
            if x.abs() > row[lead].abs() {
                lead = i;
            }
        }
        let sign = if row[lead] < 0.0 { -1.0 } else { 1.0 };
        for (i, x) in row.iter().enumerate() {
            eigenvectors[(i, k)] = sign * x;
        }
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}
