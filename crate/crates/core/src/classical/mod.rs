//! Classical (h,φ)-entropies: finite vectors, infinite sequences,
//! majorization and bistochastic mixing.

mod bistochastic;
mod jensen;
mod majorization;
mod prob;
mod sequence;

pub use bistochastic::BistochasticMatrix;
pub use jensen::{jensen_step_oracle, JensenOracle, StepFunction};
pub use majorization::{
    compare, majorization_margin, majorizes, majorizes_truncated, MajorizationVerdict,
    MAJORIZATION_TOL,
};
pub use prob::{sorted_desc, ProbVector, CLIP_TOL, NORMALIZATION_TOL};
pub use sequence::{entropy_sequence, SequenceSource, TailDescriptor, WINDOW};

use serde::{Deserialize, Serialize};

use crate::functionals::EntropicFunctional;

/// How an entropy value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntropyStatus {
    /// Finite input, or an analytic tail bound certified the remainder.
    Exact,
    /// Partial sums stopped moving by more than the increment tolerance.
    TruncatedEstimate,
    /// The term budget ran out with the partial sums still growing; the
    /// value is reported as `+∞`.
    DeclaredDivergent,
}

impl std::fmt::Display for EntropyStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EntropyStatus::Exact => "exact",
            EntropyStatus::TruncatedEstimate => "truncated-estimate",
            EntropyStatus::DeclaredDivergent => "declared-divergent",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub value: f64,
    pub status: EntropyStatus,
    pub terms_used: usize,
    pub increment_at_stop: f64,
}

/// `Σ φ(p_i)` summed in ascending order of `p_i`, so the result depends only
/// on the multiset of entries.
pub fn phi_sum(entries: &[f64], f: &EntropicFunctional) -> f64 {
    let mut sorted = entries.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().map(|&x| f.phi(x)).sum()
}

/// `h(Σ φ(p_i))` for a finite probability vector.
pub fn entropy_finite(p: &ProbVector, f: &EntropicFunctional) -> EntropyResult {
    EntropyResult {
        value: f.h(phi_sum(p.entries(), f)),
        status: EntropyStatus::Exact,
        terms_used: p.len(),
        increment_at_stop: 0.0,
    }
}

/// Entropy of a raw weight list that is already known to be a probability
/// vector (e.g. decomposition weights). Same summation path as
/// [`entropy_finite`].
pub fn entropy_of_weights(weights: &[f64], f: &EntropicFunctional) -> f64 {
    f.h(phi_sum(weights, f))
}
