//! Small dense complex-matrix helpers shared by the quantum and classical
//! modules.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// `‖V†V − I‖_max`.
pub fn isometry_deviation(v: &CMatrix) -> f64 {
    let g = v.adjoint() * v;
    let n = g.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    dev
}

/// `‖A − A†‖_max`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `(A + A†) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Real part of the trace.
pub fn trace_re(a: &CMatrix) -> f64 {
    a.diagonal().iter().map(|z| z.re).sum()
}

/// In-place modified Gram–Schmidt over the given columns of `basis`.
pub fn orthonormalize_columns(basis: &mut CMatrix, cols: std::ops::Range<usize>) {
    for j in cols.clone() {
        for k in cols.start..j {
            let proj: C64 = basis.column(k).dotc(&basis.column(j));
            let ck = basis.column(k).clone_owned();
            let mut cj = basis.column_mut(j);
            cj -= ck * proj;
        }
        let norm = basis.column(j).norm();
        if norm > 0.0 {
            let mut cj = basis.column_mut(j);
            cj /= C64::new(norm, 0.0);
        }
    }
}

/// `|v⟩⟨v|` scaled by `w`.
pub fn weighted_projector(v: &CVector, w: f64) -> CMatrix {
    (v * v.adjoint()).scale(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_isometry() {
        let v = CMatrix::identity(4, 2);
        assert_eq!(isometry_deviation(&v), 0.0);
    }

    #[test]
    fn gram_schmidt_produces_orthonormal_columns() {
        let mut b = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(1.0, 0.5), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        );
        orthonormalize_columns(&mut b, 0..2);
        assert!(isometry_deviation(&b) < 1e-14);
    }

    #[test]
    fn hermitian_checks() {
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        );
        assert_eq!(hermitian_deviation(&a), 0.0);
        assert_eq!(trace_re(&a), 3.0);
        let b = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 1.0), C64::new(2.0, 0.0)],
        );
        assert!((hermitian_deviation(&b) - 2.0).abs() < 1e-15);
        assert_eq!(hermitian_deviation(&hermitian_part(&b)), 0.0);
    }
}
