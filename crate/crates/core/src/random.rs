//! Seeded random instances for audits and tests.
//!
//! Every trial draws from its own ChaCha stream derived from the master seed,
//! so results do not depend on how trials are scheduled.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::classical::ProbVector;
use crate::linalg::{trace_re, CMatrix, C64};
use crate::quantum::DensityOperator;

/// RNG for trial `trial` under master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed `rows × cols` isometry (`rows ≥ cols`): QR of a complex
/// Gaussian matrix with the phases of `R`'s diagonal pushed into `Q`.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = complex_gaussian(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let phase = d / n;
            let mut c = q.column_mut(j);
            c *= phase;
        }
    }
    q
}

pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    random_isometry(d, d, rng)
}

/// `GG† / Tr(GG†)` with `G` a `d × rank` complex Gaussian.
pub fn random_density_with_rank<R: Rng + ?Sized>(
    d: usize,
    rank: usize,
    rng: &mut R,
) -> DensityOperator {
    let g = complex_gaussian(d, rank.max(1), rng);
    let m = &g * g.adjoint();
    let t = trace_re(&m);
    let m = crate::linalg::hermitian_part(&m.unscale(t));
    DensityOperator::new(m).expect("Gram matrix is a valid density operator")
}

/// Full-rank random density operator.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    random_density_with_rank(d, d, rng)
}

/// Uniform on the simplex (flat Dirichlet).
pub fn random_prob_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProbVector {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    ProbVector::renormalized(e).expect("exponential draws are positive")
}
