use serde::{Deserialize, Serialize};

use crate::classical::{sorted_desc, SequenceSource, NORMALIZATION_TOL};
use crate::error::{Error, Result};

/// Slack allowed on each partial-sum comparison.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// `min_k (Σ_{i≤k} p↓_i − Σ_{i≤k} q↓_i)` over the padded common length.
///
/// Nonnegative (up to rounding) exactly when `q ⪯ p`. Fails if the totals
/// differ by more than `1e-9`.
pub fn majorization_margin(p: &[f64], q: &[f64]) -> Result<f64> {
    let total_p: f64 = p.iter().sum();
    let total_q: f64 = q.iter().sum();
    if (total_p - total_q).abs() > NORMALIZATION_TOL {
        return Err(Error::TotalMismatch(total_p, total_q));
    }
    let ps = sorted_desc(p);
    let qs = sorted_desc(q);
    let n = ps.len().max(qs.len());
    let (mut sp, mut sq) = (0.0, 0.0);
    let mut margin = f64::INFINITY;
    for k in 0..n {
        sp += ps.get(k).copied().unwrap_or(0.0);
        sq += qs.get(k).copied().unwrap_or(0.0);
        margin = margin.min(sp - sq);
    }
    Ok(if n == 0 { 0.0 } else { margin })
}

/// `true` iff `q ⪯ p`, i.e. every sorted partial sum of `q` is at most the
/// matching one of `p` (plus [`MAJORIZATION_TOL`]). Inputs are sorted here;
/// the shorter list is padded with zeros.
pub fn majorizes(p: &[f64], q: &[f64]) -> Result<bool> {
    Ok(majorization_margin(p, q)? >= -MAJORIZATION_TOL)
}

/// Majorization of two sequences compared on their first `terms` entries.
/// The truncated totals must agree within `1e-9`.
pub fn majorizes_truncated(p: &SequenceSource, q: &SequenceSource, terms: usize) -> Result<bool> {
    majorizes(&p.take(terms), &q.take(terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MajorizationVerdict {
    /// `q ⪯ p` and `p ⪯ q`: equal up to permutation.
    Both,
    /// Only `q ⪯ p`.
    QBelowP,
    /// Only `p ⪯ q`.
    PBelowQ,
    Incomparable,
}

impl std::fmt::Display for MajorizationVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MajorizationVerdict::Both => "both",
            MajorizationVerdict::QBelowP => "q ⪯ p",
            MajorizationVerdict::PBelowQ => "p ⪯ q",
            MajorizationVerdict::Incomparable => "incomparable",
        })
    }
}

pub fn compare(p: &[f64], q: &[f64]) -> Result<MajorizationVerdict> {
    let q_below = majorizes(p, q)?;
    let p_below = majorizes(q, p)?;
    Ok(match (q_below, p_below) {
        (true, true) => MajorizationVerdict::Both,
        (true, false) => MajorizationVerdict::QBelowP,
        (false, true) => MajorizationVerdict::PBelowQ,
        (false, false) => MajorizationVerdict::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert!(majorizes(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        assert!(!majorizes(&[0.5, 0.5], &[1.0, 0.0]).unwrap());
        assert!(majorizes(&[0.75, 0.25], &[0.75, 0.25]).unwrap());
        assert!(!majorizes(&[0.5, 0.3, 0.2], &[0.6, 0.3, 0.1]).unwrap());
    }

    #[test]
    fn sorts_inputs() {
        assert!(majorizes(&[0.0, 1.0], &[0.5, 0.5]).unwrap());
        assert!(majorizes(&[0.2, 0.8], &[0.7, 0.3]).unwrap());
    }

    #[test]
    fn pads_shorter_list() {
        assert!(majorizes(&[0.5, 0.5], &[0.5, 0.25, 0.25]).unwrap());
        assert!(!majorizes(&[0.5, 0.25, 0.25], &[0.5, 0.5]).unwrap());
    }

    #[test]
    fn total_mismatch_is_an_error() {
        assert!(matches!(majorizes(&[1.0], &[0.5, 0.4]), Err(Error::TotalMismatch(..))));
    }

    #[test]
    fn verdicts() {
        assert_eq!(compare(&[1.0, 0.0], &[0.5, 0.5]).unwrap(), MajorizationVerdict::QBelowP);
        assert_eq!(compare(&[0.3, 0.7], &[0.7, 0.3]).unwrap(), MajorizationVerdict::Both);
        // partial sums (0.5, 0.8, 1) vs (0.6, 0.8, 1)
        assert_eq!(
            compare(&[0.5, 0.3, 0.2], &[0.6, 0.2, 0.2]).unwrap(),
            MajorizationVerdict::PBelowQ
        );
        assert_eq!(
            compare(&[0.6, 0.2, 0.2], &[0.5, 0.4, 0.1]).unwrap(),
            MajorizationVerdict::Incomparable
        );
    }

    #[test]
    fn truncated_sequences() {
        let g = SequenceSource::geometric(0.5).unwrap();
        let h = SequenceSource::geometric(0.5).unwrap();
        assert!(majorizes_truncated(&g, &h, 60).unwrap());
        let z = SequenceSource::zeta(2.0).unwrap();
        assert!(majorizes_truncated(&g, &z, 60).is_err());
    }

    fn prob_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, n).prop_filter_map("nonzero", |v| {
            let s: f64 = v.iter().sum();
            (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn reflexive(p in prob_vec(6)) {
            prop_assert!(majorizes(&p, &p).unwrap());
        }

        #[test]
        fn transitive(p in prob_vec(5), q in prob_vec(5), r in prob_vec(5)) {
            if majorizes(&p, &q).unwrap() && majorizes(&q, &r).unwrap() {
                prop_assert!(majorizes(&p, &r).unwrap());
            }
        }

        #[test]
        fn extremes(p in prob_vec(7)) {
            let n = p.len();
            let mut point = vec![0.0; n];
            point[0] = 1.0;
            let uniform = vec![1.0 / n as f64; n];
            prop_assert!(majorizes(&point, &p).unwrap());
            prop_assert!(majorizes(&p, &uniform).unwrap());
        }
    }
}
