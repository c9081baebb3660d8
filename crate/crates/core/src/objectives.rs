//! Analytic objectives shipped with the toolkit: a general quadratic form,
//! the 2-D Rosenbrock valley, and a tilted 1-D double well. The
//! Lennard-Jones cluster objective lives in [`crate::ljcluster`].

use crate::error::CoreError;
use crate::objective::ObjectiveFunction;
use crate::rng::RngStream;
use crate::vector::{SquareMatrix, VectorN};

/// `E(x) = 1/2 x^T A x - b^T x` with symmetric `A`.
///
/// With A positive definite the unique minimizer solves `A x = b`; the force
/// is `b - A x`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    a: SquareMatrix,
    b: VectorN,
}

impl Quadratic {
    pub fn new(a: SquareMatrix, b: VectorN) -> Result<Self, CoreError> {
        if a.n() != b.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: a.n(),
                actual: b.dim(),
            });
        }
        for i in 0..a.n() {
            for j in (i + 1)..a.n() {
                if a.get(i, j) != a.get(j, i) {
                    return Err(CoreError::InvalidConfig(format!(
                        "quadratic form requires a symmetric matrix; entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(Self { a, b })
    }

    /// The 2-D form used throughout the test suite:
    /// A = [[4, 1], [1, 3]], b = (1, 2).
    pub fn two_by_two() -> Self {
        Self::new(
            SquareMatrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).expect("static matrix"),
            VectorN::new(vec![1.0, 2.0]).expect("static vector"),
        )
        .expect("static quadratic")
    }

    /// `E(x) = x^2` as a 1-D quadratic form (A = [[2]], b = (0)).
    pub fn one_d_square() -> Self {
        Self::new(
            SquareMatrix::from_rows(&[vec![2.0]]).expect("static matrix"),
            VectorN::new(vec![0.0]).expect("static vector"),
        )
        .expect("static quadratic")
    }

    /// Random symmetric positive definite instance: `A = M^T M + I` with `M`
    /// uniform in `[-1, 1]^{n x n}`, `b` uniform in `[-2, 2]^n`.
    pub fn random_spd(n: usize, rng: &mut RngStream) -> Self {
        assert!(n >= 1);
        let mut m = vec![vec![0.0; n]; n];
        for row in &mut m {
            for entry in row.iter_mut() {
                *entry = rng.next_range_f64(-1.0, 1.0);
            }
        }
        let mut a = SquareMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for row in &m {
                    acc += row[i] * row[j];
                }
                a.set(i, j, a.get(i, j) + acc);
            }
        }
        let b = VectorN::new((0..n).map(|_| rng.next_range_f64(-2.0, 2.0)).collect())
            .expect("finite random vector");
        Self::new(a, b).expect("M^T M + I is symmetric")
    }

    pub fn a(&self) -> &SquareMatrix {
        &self.a
    }

    pub fn b(&self) -> &VectorN {
        &self.b
    }
}

impl ObjectiveFunction for Quadratic {
    fn dimension(&self) -> usize {
        self.b.dim()
    }

    fn energy(&self, x: &VectorN) -> f64 {
        0.5 * x.dot(&self.a.matvec(x)) - self.b.dot(x)
    }

    fn force(&self, x: &VectorN) -> VectorN {
        self.b.sub(&self.a.matvec(x))
    }
}

/// The 2-D Rosenbrock valley `E(x, y) = (a - x)^2 + b (y - x^2)^2`,
/// minimum 0 at `(a, a^2)`.
#[derive(Debug, Clone)]
pub struct Rosenbrock {
    pub a: f64,
    pub b: f64,
}

impl Default for Rosenbrock {
    fn default() -> Self {
        Self { a: 1.0, b: 100.0 }
    }
}

impl ObjectiveFunction for Rosenbrock {
    fn dimension(&self) -> usize {
        2
    }

    fn energy(&self, x: &VectorN) -> f64 {
        let (u, v) = (x[0], x[1]);
        (self.a - u).powi(2) + self.b * (v - u * u).powi(2)
    }

    fn force(&self, x: &VectorN) -> VectorN {
        let (u, v) = (x[0], x[1]);
        let de_du = -2.0 * (self.a - u) - 4.0 * self.b * u * (v - u * u);
        let de_dv = 2.0 * self.b * (v - u * u);
        VectorN::from_raw(vec![-de_du, -de_dv])
    }
}

/// Tilted 1-D double well `E(x) = (x^2 - 1)^2 + 0.3 x`.
///
/// The tilt breaks the symmetry: the global minimum sits in the negative
/// basin near `x = -1.036` at `E = -0.3054`, while the positive basin
/// bottoms out near `x = +0.96` at `E = +0.294`.
#[derive(Debug, Clone, Default)]
pub struct TiltedDoubleWell;

impl ObjectiveFunction for TiltedDoubleWell {
    fn dimension(&self) -> usize {
        1
    }

    fn energy(&self, x: &VectorN) -> f64 {
        let u = x[0];
        (u * u - 1.0).powi(2) + 0.3 * u
    }

    fn force(&self, x: &VectorN) -> VectorN {
        let u = x[0];
        VectorN::from_raw(vec![-(4.0 * u * (u * u - 1.0) + 0.3)])
    }
}
