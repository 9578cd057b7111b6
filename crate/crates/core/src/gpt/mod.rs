//! Probabilistic models whose state space is a polytope given by its
//! extreme points.
//!
//! The entropy of a state `x` is the infimum of `h(Σ_k φ(μ_k))` over discrete
//! measures `μ` on the vertices with barycenter `x`. The feasible weights
//! form a polytope and `h∘Σφ` is a monotone transform of a concave (or, with
//! `h` decreasing, convex) function, so the infimum is attained at a vertex
//! of that polytope: a basic feasible solution supported on at most `d + 1`
//! affinely independent vertices. Splitting a weight over repeated copies of
//! a vertex cannot help either (`φ` is subadditive in the concave case and
//! superadditive in the convex one). The search is therefore a finite
//! enumeration over vertex subsets.

mod solve;

pub use solve::{affine_rank, barycentric_weights, PIVOT_TOL, RESIDUAL_TOL};

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::classical::{entropy_of_weights, majorizes, sorted_desc};
use crate::error::{Error, Result};
use crate::functionals::EntropicFunctional;

/// Weights at or below this are treated as zero.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Reconstruction tolerance for a decomposition's barycenter.
pub const BARYCENTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelLimits {
    pub max_vertices: usize,
    pub max_dim: usize,
}

impl Default for ModelLimits {
    fn default() -> Self {
        Self {
            max_vertices: 12,
            max_dim: 4,
        }
    }
}

/// A polytope state space: ambient dimension and its extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexModel {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    is_simplex: bool,
}

impl ConvexModel {
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_limits(dim, vertices, ModelLimits::default())
    }

    /// Validates sizes against `limits` and checks that every vertex is
    /// extreme (not in the hull of the others).
    pub fn with_limits(dim: usize, vertices: Vec<Vec<f64>>, limits: ModelLimits) -> Result<Self> {
        let n = vertices.len();
        if dim == 0 || n == 0 {
            return Err(Error::InvalidModel("need d >= 1 and at least one vertex".into()));
        }
        if dim > limits.max_dim {
            return Err(Error::InvalidModel(format!(
                "dimension {dim} exceeds cap {}",
                limits.max_dim
            )));
        }
        if n > limits.max_vertices {
            return Err(Error::InvalidModel(format!(
                "{n} vertices exceed cap {}",
                limits.max_vertices
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidModel(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidModel(format!("vertex {i} is not finite")));
            }
        }
        for j in 0..n {
            let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
            if first_basic(&vertices, &others, dim, &vertices[j]).is_some() {
                return Err(Error::InvalidModel(format!(
                    "vertex {j} is a convex combination of the others"
                )));
            }
        }
        let refs: Vec<&[f64]> = vertices.iter().map(Vec::as_slice).collect();
        let is_simplex = n == dim + 1 && affine_rank(&refs) == n;
        Ok(Self {
            dim,
            vertices,
            is_simplex,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_simplex(&self) -> bool {
        self.is_simplex
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// A discrete measure on the vertices: distinct indices with positive
/// weights summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub support: Vec<usize>,
    pub weights: Vec<f64>,
}

impl Decomposition {
    /// `Σ_k μ_k v_{s_k}`.
    pub fn barycenter(&self, model: &ConvexModel) -> Vec<f64> {
        let mut b = vec![0.0; model.dim];
        for (&i, &w) in self.support.iter().zip(&self.weights) {
            for (bj, vj) in b.iter_mut().zip(&model.vertices[i]) {
                *bj += w * vj;
            }
        }
        b
    }

    pub fn barycenter_error(&self, model: &ConvexModel, x: &[f64]) -> f64 {
        self.barycenter(model)
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn entropy(&self, f: &EntropicFunctional) -> f64 {
        entropy_of_weights(&self.weights, f)
    }

    /// Weights spread over all `n` vertices.
    pub fn dense_weights(&self, n: usize) -> Vec<f64> {
        let mut w = vec![0.0; n];
        for (&i, &m) in self.support.iter().zip(&self.weights) {
            w[i] += m;
        }
        w
    }

    /// Drops zero weights from a dense weight vector.
    pub fn from_dense(weights: &[f64]) -> Self {
        let (support, weights) = weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > WEIGHT_TOL)
            .map(|(i, &w)| (i, w))
            .unzip();
        Self { support, weights }
    }
}

/// A point of the state space with a membership witness.
#[derive(Debug, Clone, PartialEq)]
pub struct GptState {
    pub point: Vec<f64>,
    pub witness: Option<Decomposition>,
}

impl GptState {
    /// Fails if `point` lies outside the hull.
    pub fn new(model: &ConvexModel, point: Vec<f64>) -> Result<Self> {
        let witness = membership(model, &point)?
            .ok_or_else(|| Error::InvalidArgument("point lies outside the convex hull".into()))?;
        Ok(Self {
            point,
            witness: Some(witness),
        })
    }
}

/// Lexicographic k-subsets of `0..n`, via a successor function.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in (i + 1)..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `visit` with every basic feasible decomposition of `x` using
/// vertices from `pool`, smallest supports first, lexicographic within a
/// size. Stops early if `visit` returns `false`.
fn for_each_basic<F>(vertices: &[Vec<f64>], pool: &[usize], dim: usize, x: &[f64], mut visit: F)
where
    F: FnMut(Decomposition) -> bool,
{
    let n = pool.len();
    for k in 1..=n.min(dim + 1) {
        let mut c: Vec<usize> = (0..k).collect();
        loop {
            let pts: Vec<&[f64]> = c.iter().map(|&i| vertices[pool[i]].as_slice()).collect();
            if let Some(mu) = barycentric_weights(&pts, x) {
                // A weight at zero means a smaller subset carries the same
                // solution; that subset is visited on its own.
                if mu.iter().all(|&m| m > WEIGHT_TOL) {
                    let d = Decomposition {
                        support: c.iter().map(|&i| pool[i]).collect(),
                        weights: mu,
                    };
                    if !visit(d) {
                        return;
                    }
                }
            }
            if !next_combination(&mut c, n) {
                break;
            }
        }
    }
}

fn first_basic(vertices: &[Vec<f64>], pool: &[usize], dim: usize, x: &[f64]) -> Option<Decomposition> {
    let mut found = None;
    for_each_basic(vertices, pool, dim, x, |d| {
        found = Some(d);
        false
    });
    found
}

/// A witness decomposition if `x` is in the hull, `None` otherwise.
pub fn membership(model: &ConvexModel, x: &[f64]) -> Result<Option<Decomposition>> {
    model.check_point(x)?;
    let pool: Vec<usize> = (0..model.len()).collect();
    Ok(first_basic(&model.vertices, &pool, model.dim, x))
}

/// Every basic feasible decomposition of `x`: supports are affinely
/// independent vertex subsets of size at most `d + 1` with strictly
/// positive weights. Each support appears once. Empty if `x` is outside.
pub fn enumerate_basic_decompositions(model: &ConvexModel, x: &[f64]) -> Result<Vec<Decomposition>> {
    model.check_point(x)?;
    let pool: Vec<usize> = (0..model.len()).collect();
    let mut out = Vec::new();
    for_each_basic(&model.vertices, &pool, model.dim, x, |d| {
        out.push(d);
        true
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GptStatus {
    /// The minimum over basic decompositions.
    Attained,
    /// The point has no decomposition; the value is `+∞`.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GptEntropy {
    pub value: f64,
    pub status: GptStatus,
    pub argmin: Option<Decomposition>,
}

fn lex_support(a: &Decomposition, b: &Decomposition) -> Ordering {
    a.support.cmp(&b.support)
}

/// `min h(Σ_k φ(μ_k))` over basic decompositions of `x`; ties go to the
/// lexicographically smallest support.
pub fn gpt_entropy(model: &ConvexModel, x: &[f64], f: &EntropicFunctional) -> Result<GptEntropy> {
    let all = enumerate_basic_decompositions(model, x)?;
    let best = all
        .into_iter()
        .map(|d| (d.entropy(f), d))
        .min_by(|(ha, da), (hb, db)| ha.total_cmp(hb).then_with(|| lex_support(da, db)));
    Ok(match best {
        Some((value, d)) => GptEntropy {
            value,
            status: GptStatus::Attained,
            argmin: Some(d),
        },
        None => GptEntropy {
            value: f64::INFINITY,
            status: GptStatus::Infeasible,
            argmin: None,
        },
    })
}

/// A sorted basic weight vector that majorizes every other basic weight
/// vector, if one exists.
///
/// Sorted partial sums are convex in the weights and merging split weights
/// only moves up in the majorization order, so majorizing every basic
/// solution is enough to majorize every decomposition of `x`.
pub fn gpt_majorant(model: &ConvexModel, x: &[f64]) -> Result<Option<Vec<f64>>> {
    let sorted: Vec<Vec<f64>> = enumerate_basic_decompositions(model, x)?
        .iter()
        .map(|d| sorted_desc(&d.weights))
        .collect();
    for cand in &sorted {
        let mut dominates = true;
        for other in &sorted {
            if !majorizes(cand, other)? {
                dominates = false;
                break;
            }
        }
        if dominates {
            return Ok(Some(cand.clone()));
        }
    }
    Ok(None)
}

/// Whether `spectra(y) ⪯ spectra(x)`; `None` if either state lacks a
/// majorant.
pub fn gpt_majorization(model: &ConvexModel, x: &[f64], y: &[f64]) -> Result<Option<bool>> {
    let (Some(sx), Some(sy)) = (gpt_majorant(model, x)?, gpt_majorant(model, y)?) else {
        return Ok(None);
    };
    Ok(Some(majorizes(&sx, &sy)?))
}
