use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Matrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from a row-major buffer. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length does not match shape");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(f64, f64) -> f64) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Submatrix on the given (0-based) row and column positions.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Columns at the given (0-based) positions.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let all: Vec<usize> = (0..self.rows).collect();
        self.select(&all, cols)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Relative asymmetry accepted by the strict JSON reader.
pub const ASYMMETRY_TOL: f64 = 1e-12;

/// Dense real symmetric matrix: a compact self-adjoint operator on a truncated basis.
///
/// Entries are exactly symmetric and finite; constructors symmetrize as `(M + Mᵀ)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    /// Symmetrizes a square matrix. Rejects empty and non-finite input.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimMismatch(format!(
                "expected a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.rows() == 0 {
            return Err(Error::DimMismatch("0x0 matrix".into()));
        }
        let n = m.rows();
        for i in 0..n {
            for j in 0..n {
                if !m[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        let mut out = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (out[(i, j)] + out[(j, i)]);
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        Ok(SymmetricMatrix(out))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        SymmetricMatrix::new(Matrix::from_rows(rows)?)
    }

    /// Like [`SymmetricMatrix::from_rows`] but refuses input whose asymmetry exceeds
    /// [`ASYMMETRY_TOL`] relative to the largest entry.
    pub fn from_rows_strict(rows: &[Vec<f64>]) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        if m.rows() == m.cols() {
            let scale = m.max_abs();
            for i in 0..m.rows() {
                for j in (i + 1)..m.cols() {
                    let diff = (m[(i, j)] - m[(j, i)]).abs();
                    if diff > ASYMMETRY_TOL * scale {
                        return Err(Error::Asymmetric { row: i, col: j, diff });
                    }
                }
            }
        }
        SymmetricMatrix::new(m)
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        SymmetricMatrix::new(Matrix::from_diag(diag))
    }

    pub fn identity(n: usize) -> Result<Self> {
        SymmetricMatrix::new(Matrix::identity(n))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        SymmetricMatrix::new(Matrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn add(&self, rhs: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        self.check_dim(rhs)?;
        SymmetricMatrix::new(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        self.check_dim(rhs)?;
        SymmetricMatrix::new(self.0.sub(&rhs.0))
    }

    pub fn scale(&self, s: f64) -> Result<SymmetricMatrix> {
        SymmetricMatrix::new(self.0.scale(s))
    }

    pub(crate) fn check_dim(&self, rhs: &SymmetricMatrix) -> Result<()> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimMismatch(format!(
                "{} vs {}",
                self.dim(),
                rhs.dim()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            dim: self.dim(),
            rows: self.0.to_rows(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        if json.rows.len() != json.dim || json.rows.iter().any(|r| r.len() != json.dim) {
            return Err(Error::DimMismatch(format!(
                "declared dim {} does not match rows",
                json.dim
            )));
        }
        SymmetricMatrix::from_rows_strict(&json.rows)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: MatrixJson = serde_json::from_str(s)?;
        SymmetricMatrix::from_json(&json)
    }
}

impl Index<(usize, usize)> for SymmetricMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

impl Serialize for SymmetricMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = MatrixJson::deserialize(d)?;
        SymmetricMatrix::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Wire form of a symmetric matrix: `{"dim": n, "rows": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub rows: Vec<Vec<f64>>,
}
