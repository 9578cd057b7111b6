//! Finite-dimensional density operators and their (h,φ)-entropies.

mod ensemble;
mod pinching;

pub use ensemble::{
    ensemble_from_mixing, inf_ensemble_entropy, random_ensemble, random_ensemble_with_rng,
    Ensemble, EnsembleInfimum,
};
pub use pinching::{pinch, pinching_inequality_audit, PINCHING_TOL};

use nalgebra::linalg::SymmetricEigen;
use serde::Serialize;

use crate::classical::{entropy_finite, EntropyResult, ProbVector};
use crate::error::{Error, Result};
use crate::functionals::EntropicFunctional;
use crate::linalg::{
    hermitian_deviation, hermitian_part, isometry_deviation, orthonormalize_columns, trace_re,
    CMatrix, CVector, C64,
};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are clipped to zero.
pub const POSITIVITY_TOL: f64 = 1e-9;
pub const ISOMETRY_TOL: f64 = 1e-8;
/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Eigenvalues above this count toward the rank.
pub const RANK_TOL: f64 = 1e-12;
/// Computed probabilities at or below this are rounding noise and are set
/// to exactly zero (φ with unbounded slope at 0, e.g. Rényi α < 1, would
/// otherwise turn 1e-16 noise into visible entropy).
pub const NUMERICAL_ZERO: f64 = 1e-13;

/// Eigenvalues of a density operator, nonincreasing, with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of eigenvalues strictly above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > tol).count()
    }

    pub fn to_prob_vector(&self) -> ProbVector {
        ProbVector::new(self.eigenvalues.clone()).expect("spectrum is normalized")
    }
}

/// A Hermitian, positive semidefinite, trace-one complex matrix.
///
/// The eigendecomposition is computed once at construction and reused.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
    spectrum: Spectrum,
    eigenbasis: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c {
            return Err(Error::NotSquare(r, c));
        }
        if r == 0 {
            return Err(Error::Empty);
        }
        if matrix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let dev = hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = hermitian_part(&matrix);
        let tr = trace_re(&matrix);
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let (spectrum, eigenbasis) = decompose(&matrix)?;
        Ok(Self {
            matrix,
            spectrum,
            eigenbasis,
        })
    }

    /// `diag(p)`.
    pub fn diagonal(p: &ProbVector) -> Self {
        let m = CMatrix::from_diagonal(&CVector::from_iterator(
            p.len(),
            p.entries().iter().map(|&x| C64::new(x, 0.0)),
        ));
        Self::new(m).expect("diagonal of a probability vector")
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        let v = psi.unscale(n);
        Self::new(&v * v.adjoint())
    }

    /// `I / d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty);
        }
        Self::new(CMatrix::identity(d, d).unscale(d as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Columns are eigenvectors, ordered like [`Spectrum::eigenvalues`].
    pub fn eigenbasis(&self) -> &CMatrix {
        &self.eigenbasis
    }

    pub fn rank(&self) -> usize {
        self.spectrum.rank(RANK_TOL)
    }
}

fn decompose(matrix: &CMatrix) -> Result<(Spectrum, CMatrix)> {
    let d = matrix.nrows();
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let min = eig.eigenvalues[order[d - 1]];
    if min < -POSITIVITY_TOL {
        return Err(Error::NotPositive(min));
    }
    let mut values: Vec<f64> = order
        .iter()
        .map(|&i| snap_zero(eig.eigenvalues[i]))
        .collect();
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        values.iter_mut().for_each(|l| *l /= total);
    }
    values.iter_mut().for_each(|l| *l = l.min(1.0));

    let mut basis = CMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    let mut start = 0;
    for k in 1..=d {
        if k == d || values[k - 1] - values[k] >= DEGENERACY_GAP {
            if k - start > 1 {
                orthonormalize_columns(&mut basis, start..k);
            }
            start = k;
        }
    }
    Ok((Spectrum { eigenvalues: values }, basis))
}

pub(crate) fn snap_zero(x: f64) -> f64 {
    if x <= NUMERICAL_ZERO {
        0.0
    } else {
        x
    }
}

/// Decreasing eigenvalues and a matching orthonormal eigenbasis.
pub fn eigen_spectrum(rho: &DensityOperator) -> (Spectrum, CMatrix) {
    (rho.spectrum.clone(), rho.eigenbasis.clone())
}

/// `h(Tr φ(ρ))`, evaluated on the spectrum through the classical path.
pub fn quantum_entropy(rho: &DensityOperator, f: &EntropicFunctional) -> EntropyResult {
    entropy_finite(&rho.spectrum.to_prob_vector(), f)
}

/// `VρV†` for an isometry `V` (`D × d`, `V†V = I_d`).
pub fn conjugate_isometry(rho: &DensityOperator, v: &CMatrix) -> Result<DensityOperator> {
    if v.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: v.ncols(),
        });
    }
    if v.nrows() < v.ncols() {
        return Err(Error::NotIsometry(f64::INFINITY));
    }
    let dev = isometry_deviation(v);
    if dev > ISOMETRY_TOL {
        return Err(Error::NotIsometry(dev));
    }
    let out = hermitian_part(&(v * &rho.matrix * v.adjoint()));
    let tr = trace_re(&out);
    DensityOperator::new(out.unscale(tr))
}
