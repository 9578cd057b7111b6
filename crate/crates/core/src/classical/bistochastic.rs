use nalgebra::{Complex, DMatrix};

use crate::classical::ProbVector;
use crate::error::{Error, Result};

/// Row/column sum tolerance.
pub const STOCHASTIC_TOL: f64 = 1e-10;
/// Tolerance on `‖U†U − I‖_max` for a unitary input.
pub const UNITARY_TOL: f64 = 1e-8;

/// A doubly stochastic matrix: nonnegative, every row and column sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BistochasticMatrix {
    q: DMatrix<f64>,
}

impl BistochasticMatrix {
    pub fn new(q: DMatrix<f64>) -> Result<Self> {
        if q.nrows() != q.ncols() {
            return Err(Error::NotSquare(q.nrows(), q.ncols()));
        }
        if q.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(v) = q.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::NotBistochastic(format!("entry {v} is negative or not finite")));
        }
        for (i, row) in q.row_iter().enumerate() {
            let s = row.sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotBistochastic(format!("row {i} sums to {s}")));
            }
        }
        for (j, col) in q.column_iter().enumerate() {
            let s = col.sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotBistochastic(format!("column {j} sums to {s}")));
            }
        }
        Ok(Self { q })
    }

    /// `Q_ij = |U_ij|²` for a unitary `U`.
    pub fn from_unitary(u: &DMatrix<Complex<f64>>) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return Err(Error::NotSquare(u.nrows(), u.ncols()));
        }
        let dev = crate::linalg::isometry_deviation(u);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Self::new(u.map(|z| z.norm_sqr()))
    }

    /// Every entry `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Self::new(DMatrix::from_element(n, n, 1.0 / n as f64))
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Self::new(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.q.row(i).iter().copied().collect()
    }

    /// `q_i = Σ_k Q_ik p_k`.
    pub fn apply(&self, p: &ProbVector) -> Result<ProbVector> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        let q = (0..self.dim())
            .map(|i| self.q.row(i).iter().zip(p.entries()).map(|(a, b)| a * b).sum())
            .collect();
        ProbVector::new(q)
    }
}
