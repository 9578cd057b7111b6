use crate::audit::AuditEntry;
use crate::classical::{entropy_finite, ProbVector};
use crate::error::{Error, Result};
use crate::functionals::EntropicFunctional;
use crate::linalg::{isometry_deviation, CMatrix};
use crate::quantum::{quantum_entropy, snap_zero, DensityOperator};

/// Orthonormality tolerance for a measurement basis.
pub const BASIS_TOL: f64 = 1e-8;
/// Slack on `H(ρ) ≤ H(pinch(ρ))`.
pub const PINCHING_TOL: f64 = 1e-9;

/// Diagonal of `ρ` in the orthonormal basis given by the columns of `basis`:
/// `p_n = ⟨e_n|ρ|e_n⟩`.
pub fn pinch(rho: &DensityOperator, basis: &CMatrix) -> Result<ProbVector> {
    let d = rho.dim();
    if basis.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: if basis.nrows() != d { basis.nrows() } else { basis.ncols() },
        });
    }
    let dev = isometry_deviation(basis);
    if dev > BASIS_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let p = basis
        .column_iter()
        .map(|e| snap_zero((e.adjoint() * rho.matrix() * e)[(0, 0)].re))
        .collect();
    ProbVector::new(p)
}

/// Checks `H(ρ) ≤ H(pinch(ρ, basis)) + 1e-9`.
pub fn pinching_inequality_audit(
    rho: &DensityOperator,
    basis: &CMatrix,
    f: &EntropicFunctional,
) -> Result<AuditEntry> {
    let p = pinch(rho, basis)?;
    let lhs = quantum_entropy(rho, f).value;
    let rhs = entropy_finite(&p, f).value;
    Ok(AuditEntry::new("pinching", f.name(), lhs, rhs, rhs - lhs, PINCHING_TOL))
}
