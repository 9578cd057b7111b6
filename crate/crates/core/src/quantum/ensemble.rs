//! Pure-state ensembles `ρ = Σ_k w_k |ψ_k⟩⟨ψ_k|`.
//!
//! Every such ensemble arises from an `m × r` isometry `W` mixing the scaled
//! eigenvectors `√λ_i v_i`: `|ψ̃_k⟩ = Σ_i W_ki √λ_i |v_i⟩`, `w_k = ‖ψ̃_k‖²`.
//! Sampling `W` gives a desk-scale view of the set of decompositions whose
//! infimum entropy is taken.

use rand::Rng;

use crate::classical::{entropy_of_weights, ProbVector};
use crate::error::{Error, Result};
use crate::functionals::EntropicFunctional;
use crate::linalg::{isometry_deviation, weighted_projector, CMatrix, CVector};
use crate::quantum::{DensityOperator, ISOMETRY_TOL};
use crate::random::{random_isometry, trial_rng};

/// Weights below this leave the corresponding state undefined; it is then
/// set to the leading eigenvector.
const NULL_WEIGHT: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct Ensemble {
    weights: ProbVector,
    states: Vec<CVector>,
}

impl Ensemble {
    pub fn weights(&self) -> &ProbVector {
        &self.weights
    }

    pub fn states(&self) -> &[CVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `Σ_k w_k |ψ_k⟩⟨ψ_k|`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.states[0].len();
        self.states
            .iter()
            .zip(self.weights.entries())
            .fold(CMatrix::zeros(d, d), |acc, (psi, &w)| acc + weighted_projector(psi, w))
    }
}

/// Mixes the scaled eigenvectors of `rho` through `mixing` (`m × rank`,
/// orthonormal columns).
pub fn ensemble_from_mixing(rho: &DensityOperator, mixing: &CMatrix) -> Result<Ensemble> {
    let r = rho.rank();
    if mixing.ncols() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: mixing.ncols(),
        });
    }
    if mixing.nrows() < r {
        return Err(Error::EnsembleTooSmall {
            m: mixing.nrows(),
            rank: r,
        });
    }
    let dev = isometry_deviation(mixing);
    if dev > ISOMETRY_TOL {
        return Err(Error::NotIsometry(dev));
    }
    let lambdas = rho.spectrum().eigenvalues();
    let basis = rho.eigenbasis();
    // columns √λ_i v_i for the r leading eigenpairs
    let scaled = CMatrix::from_fn(rho.dim(), r, |row, i| basis[(row, i)] * lambdas[i].sqrt());
    // column k of `mixed` is ψ̃_k
    let mixed = scaled * mixing.transpose();
    let mut weights = Vec::with_capacity(mixing.nrows());
    let mut states = Vec::with_capacity(mixing.nrows());
    for col in mixed.column_iter() {
        let w = col.norm_squared();
        weights.push(w);
        if w > NULL_WEIGHT {
            states.push(col.unscale(w.sqrt()));
        } else {
            states.push(basis.column(0).clone_owned());
        }
    }
    Ok(Ensemble {
        weights: ProbVector::new(weights)?,
        states,
    })
}

pub fn random_ensemble_with_rng<R: Rng + ?Sized>(
    rho: &DensityOperator,
    m: usize,
    rng: &mut R,
) -> Result<Ensemble> {
    let r = rho.rank();
    if m < r {
        return Err(Error::EnsembleTooSmall { m, rank: r });
    }
    ensemble_from_mixing(rho, &random_isometry(m, r, rng))
}

/// An `m`-element ensemble from a Haar-random `m × rank` isometry.
pub fn random_ensemble(rho: &DensityOperator, m: usize, seed: u64) -> Result<Ensemble> {
    random_ensemble_with_rng(rho, m, &mut trial_rng(seed, 0))
}

#[derive(Debug, Clone)]
pub struct EnsembleInfimum {
    pub value: f64,
    pub best: Ensemble,
    pub best_trial: usize,
}

/// Smallest `H(weights)` over `trials` ensembles. Trial 0 is the spectral
/// decomposition itself; trial `t ≥ 1` uses a random isometry with
/// `m ∈ [rank, max(m_max, rank)]` drawn from stream `t` of `seed`.
pub fn inf_ensemble_entropy(
    rho: &DensityOperator,
    f: &EntropicFunctional,
    m_max: usize,
    trials: usize,
    seed: u64,
) -> Result<EnsembleInfimum> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let r = rho.rank();
    let spectral = ensemble_from_mixing(rho, &CMatrix::identity(r, r))?;
    let mut best = EnsembleInfimum {
        value: entropy_of_weights(spectral.weights().entries(), f),
        best: spectral,
        best_trial: 0,
    };
    let m_hi = m_max.max(r);
    for t in 1..trials {
        let mut rng = trial_rng(seed, t as u64);
        let m = rng.random_range(r..=m_hi);
        let ens = random_ensemble_with_rng(rho, m, &mut rng)?;
        let h = entropy_of_weights(ens.weights().entries(), f);
        if h < best.value {
            best = EnsembleInfimum {
                value: h,
                best: ens,
                best_trial: t,
            };
        }
    }
    Ok(best)
}
