use serde::Serialize;

use crate::error::{Error, Result};

/// Allowed drift of `Σ p_i` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Entries in `[-CLIP_TOL, 0)` are clipped to 0; anything lower is rejected.
pub const CLIP_TOL: f64 = 1e-12;

/// A finite probability vector.
///
/// Entries lie in `[0, 1]` and sum to 1 within [`NORMALIZATION_TOL`]. Inputs
/// are never silently renormalized unless [`ProbVector::renormalized`] is used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbVector {
    entries: Vec<f64>,
    tolerance: f64,
}

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let entries = clip_entries(entries)?;
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self {
            entries,
            tolerance: NORMALIZATION_TOL,
        })
    }

    /// Like [`ProbVector::new`] but divides by the total first. The entries
    /// must still be nonnegative and the total positive.
    pub fn renormalized(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in entries.iter().enumerate() {
            if !value.is_finite() || value < -CLIP_TOL {
                return Err(Error::EntryOutOfRange { index, value });
            }
        }
        let total: f64 = entries.iter().map(|&x| x.max(0.0)).sum();
        if total <= 0.0 {
            return Err(Error::NotNormalized(total));
        }
        Self::new(entries.into_iter().map(|x| x.max(0.0) / total).collect())
    }

    /// The point mass on outcome `index` of `len`.
    pub fn point_mass(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::DimensionMismatch {
                expected: len,
                got: index + 1,
            });
        }
        let mut e = vec![0.0; len];
        e[index] = 1.0;
        Self::new(e)
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Empty);
        }
        Self::new(vec![1.0 / len as f64; len])
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Entries in nonincreasing order; ties keep their original order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        sorted_desc(&self.entries)
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.entries
    }
}

fn clip_entries(mut entries: Vec<f64>) -> Result<Vec<f64>> {
    if entries.is_empty() {
        return Err(Error::Empty);
    }
    for (index, x) in entries.iter_mut().enumerate() {
        let value = *x;
        if !value.is_finite() || !(-CLIP_TOL..=1.0 + NORMALIZATION_TOL).contains(&value) {
            return Err(Error::EntryOutOfRange { index, value });
        }
        *x = value.clamp(0.0, 1.0);
    }
    Ok(entries)
}

/// Stable nonincreasing sort.
pub fn sorted_desc(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
