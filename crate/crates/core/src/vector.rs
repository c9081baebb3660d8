//! Small dense vector and matrix types.
//!
//! Nothing clever here: `VectorN` is a validated `Vec<f64>` with the handful
//! of operations the optimizers need, and `SquareMatrix` is a row-major
//! square matrix used for quadratic test objectives and the BFGS inverse
//! Hessian. Elementwise operations on mismatched dimensions panic — they
//! never truncate or broadcast.

use std::fmt;
use std::ops::Index;

use crate::error::CoreError;

/// An n-dimensional point or direction, n >= 1, all components finite at
/// construction time.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorN {
    components: Vec<f64>,
}

impl VectorN {
    /// Builds a vector, rejecting empty input and non-finite components.
    pub fn new(components: Vec<f64>) -> Result<Self, CoreError> {
        if components.is_empty() {
            return Err(CoreError::EmptyVector);
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(CoreError::NonFiniteInput {
                context: "vector components",
            });
        }
        Ok(Self { components })
    }

    /// The zero vector of dimension `n` (n >= 1).
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "VectorN::zeros requires n >= 1");
        Self {
            components: vec![0.0; n],
        }
    }

    /// Internal constructor for values produced by arithmetic, which may be
    /// non-finite; callers are expected to check `is_finite` before
    /// committing such a vector as optimizer state.
    pub(crate) fn from_raw(components: Vec<f64>) -> Self {
        debug_assert!(!components.is_empty());
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.components
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.components.clone()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    fn assert_same_dim(&self, other: &Self) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "vector dimension mismatch: {} vs {}",
            self.dim(),
            other.dim()
        );
    }

    /// `self + other`. Panics on dimension mismatch.
    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_dim(other);
        Self::from_raw(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self - other`. Panics on dimension mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_dim(other);
        Self::from_raw(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// `s * self`.
    pub fn scaled(&self, s: f64) -> Self {
        Self::from_raw(self.components.iter().map(|a| s * a).collect())
    }

    /// `self + a * d`. Panics on dimension mismatch.
    pub fn axpy(&self, a: f64, d: &Self) -> Self {
        self.assert_same_dim(d);
        Self::from_raw(
            self.components
                .iter()
                .zip(&d.components)
                .map(|(x, y)| x + a * y)
                .collect(),
        )
    }

    /// Euclidean inner product. Panics on dimension mismatch.
    pub fn dot(&self, other: &Self) -> f64 {
        self.assert_same_dim(other);
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl Index<usize> for VectorN {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.components[i]
    }
}

impl fmt::Display for VectorN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    /// Builds a matrix from rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, CoreError> {
        let n = rows.len();
        if n == 0 {
            return Err(CoreError::EmptyVector);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(CoreError::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFiniteInput {
                context: "matrix entries",
            });
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        let mut m = Self {
            n,
            data: vec![0.0; n * n],
        };
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Matrix-vector product. Panics on dimension mismatch.
    pub fn matvec(&self, x: &VectorN) -> VectorN {
        assert_eq!(
            self.n,
            x.dim(),
            "matrix-vector dimension mismatch: {} vs {}",
            self.n,
            x.dim()
        );
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            let mut acc = 0.0;
            for j in 0..self.n {
                acc += self.get(i, j) * x[j];
            }
            out[i] = acc;
        }
        VectorN::from_raw(out)
    }
}
