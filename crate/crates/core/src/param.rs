//! Dense model parameters with a flat vector-space view.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Vector(usize),
    /// `d x d` symmetric matrix, stored row-major.
    SymMatrix(usize),
}

impl Shape {
    pub fn len(self) -> usize {
        match self {
            Shape::Vector(d) => d,
            Shape::SymMatrix(d) => d * d,
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    pub fn dim(self) -> usize {
        match self {
            Shape::Vector(d) | Shape::SymMatrix(d) => d,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Vector(d) => write!(f, "vector({d})"),
            Shape::SymMatrix(d) => write!(f, "symmetric_matrix({d})"),
        }
    }
}

/// A model point: a `d`-vector or a `d x d` symmetric matrix.
///
/// Arithmetic treats both as flat Euclidean vectors, so the norm of a matrix
/// parameter is its Frobenius norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    shape: Shape,
    values: Vec<f64>,
}

impl Parameter {
    pub fn zeros(shape: Shape) -> Self {
        Self {
            shape,
            values: vec![0.0; shape.len()],
        }
    }

    pub fn vector(values: Vec<f64>) -> Self {
        Self {
            shape: Shape::Vector(values.len()),
            values,
        }
    }

    /// Builds a symmetric matrix parameter from row-major values.
    /// The input is symmetrized as `(M + M^T) / 2`.
    pub fn sym_matrix(d: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != d * d {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values", d * d),
                got: format!("{} values", values.len()),
            });
        }
        let mut p = Self {
            shape: Shape::SymMatrix(d),
            values,
        };
        p.symmetrize();
        Ok(p)
    }

    pub fn diag(entries: &[f64]) -> Self {
        let d = entries.len();
        let mut values = vec![0.0; d * d];
        for (i, &e) in entries.iter().enumerate() {
            values[i * d + i] = e;
        }
        Self {
            shape: Shape::SymMatrix(d),
            values,
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let d = self.shape.dim();
        self.values[row * d + col]
    }

    pub fn check_same_shape(&self, other: &Parameter) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.to_string(),
                got: other.shape.to_string(),
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Parameter) -> f64 {
        debug_assert_eq!(self.shape, other.shape);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn distance(&self, other: &Parameter) -> f64 {
        debug_assert_eq!(self.shape, other.shape);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `self += alpha * other`
    pub fn axpy(&mut self, alpha: f64, other: &Parameter) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += alpha * b;
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for v in &mut self.values {
            *v *= alpha;
        }
    }

    pub fn scaled(&self, alpha: f64) -> Parameter {
        let mut p = self.clone();
        p.scale(alpha);
        p
    }

    /// `self <- alpha * other`
    pub fn assign_scaled(&mut self, alpha: f64, other: &Parameter) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a = alpha * b;
        }
    }

    pub fn set_zero(&mut self) {
        self.values.iter_mut().for_each(|v| *v = 0.0);
    }

    /// Convex combination `self <- (1 - w) * self + w * other`.
    pub fn blend(&mut self, w: f64, other: &Parameter) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a = (1.0 - w) * *a + w * b;
        }
    }

    pub fn symmetrize(&mut self) {
        if let Shape::SymMatrix(d) = self.shape {
            for i in 0..d {
                for j in (i + 1)..d {
                    let m = 0.5 * (self.values[i * d + j] + self.values[j * d + i]);
                    self.values[i * d + j] = m;
                    self.values[j * d + i] = m;
                }
            }
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        match self.shape {
            Shape::Vector(_) => 0.0,
            Shape::SymMatrix(d) => {
                let mut worst = 0.0f64;
                for i in 0..d {
                    for j in (i + 1)..d {
                        worst = worst.max((self.values[i * d + j] - self.values[j * d + i]).abs());
                    }
                }
                worst
            }
        }
    }

    pub(crate) fn to_dmatrix(&self) -> DMatrix<f64> {
        let d = self.shape.dim();
        DMatrix::from_row_slice(d, d, &self.values)
    }

    /// Eigenvalues of a symmetric matrix parameter (ascending).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        match self.shape {
            Shape::Vector(_) => Err(Error::ShapeMismatch {
                expected: "symmetric_matrix".into(),
                got: self.shape.to_string(),
            }),
            Shape::SymMatrix(_) => {
                let mut ev: Vec<f64> = self.to_dmatrix().symmetric_eigenvalues().iter().copied().collect();
                ev.sort_by(|a, b| a.total_cmp(b));
                Ok(ev)
            }
        }
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    /// Projects a symmetric matrix onto the PSD cone by clamping negative
    /// eigenvalues to zero.
    pub(crate) fn project_psd(&mut self) {
        let d = self.shape.dim();
        let eig = SymmetricEigen::new(self.to_dmatrix());
        let mut clamped = eig.eigenvalues.clone();
        clamped.iter_mut().for_each(|v| *v = v.max(0.0));
        let q = &eig.eigenvectors;
        let m = q * DMatrix::from_diagonal(&clamped) * q.transpose();
        for i in 0..d {
            for j in 0..d {
                self.values[i * d + j] = m[(i, j)];
            }
        }
        self.symmetrize();
    }
}
