use serde::{Deserialize, Serialize};

use crate::classical::bistochastic::STOCHASTIC_TOL;
use crate::classical::ProbVector;
use crate::error::{Error, Result};
use crate::functionals::{Case, EntropicFunctional};

/// A step function on `[0, 1]` taking value `values[k]` on
/// `[breakpoints[k], breakpoints[k + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Segments of lengths `lengths[k]` laid end to end from 0.
    pub fn from_lengths(lengths: &[f64], values: &[f64]) -> Result<Self> {
        if lengths.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: lengths.len(),
                got: values.len(),
            });
        }
        let mut breakpoints = Vec::with_capacity(lengths.len() + 1);
        let mut x = 0.0;
        breakpoints.push(x);
        for &l in lengths {
            if l.is_nan() || l < 0.0 {
                return Err(Error::InvalidArgument(format!("segment length {l} is negative")));
            }
            x += l;
            breakpoints.push(x);
        }
        Ok(Self {
            breakpoints,
            values: values.to_vec(),
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Value at `x`; `None` outside the covered interval.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let end = *self.breakpoints.last()?;
        if !(0.0..end).contains(&x) {
            return None;
        }
        let k = self.breakpoints.partition_point(|&b| b <= x) - 1;
        self.values.get(k).copied()
    }

    /// `∫ g(f(x)) dx`, evaluating `f` at each segment's midpoint.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        self.breakpoints
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| {
                let v = self.eval(0.5 * (w[0] + w[1])).expect("midpoint inside segment");
                (w[1] - w[0]) * g(v)
            })
            .sum()
    }
}

/// Both sides of the step-function construction for one row of a
/// bistochastic matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JensenOracle {
    /// `∫_0^1 f`.
    pub integral_f: f64,
    /// `∫_0^1 φ∘f`.
    pub integral_phi_f: f64,
    /// `q_i = Σ_k Q_ik p_k`.
    pub discrete_q: f64,
    /// `Σ_k Q_ik φ(p_k)`.
    pub discrete_sum: f64,
    /// `φ(q_i) − Σ_k Q_ik φ(p_k)` for concave `φ`, the negation for convex;
    /// nonnegative when Jensen's inequality holds in the declared direction.
    pub jensen_margin: f64,
}

impl JensenOracle {
    pub fn integral_error(&self) -> f64 {
        (self.integral_f - self.discrete_q)
            .abs()
            .max((self.integral_phi_f - self.discrete_sum).abs())
    }
}

pub fn jensen_step_oracle(
    row: &[f64],
    p: &ProbVector,
    f: &EntropicFunctional,
) -> Result<JensenOracle> {
    let total: f64 = row.iter().sum();
    if (total - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::NotBistochastic(format!("row sums to {total}")));
    }
    let step = StepFunction::from_lengths(row, p.entries())?;
    let integral_f = step.integrate(|v| v);
    let integral_phi_f = step.integrate(|v| f.phi(v));
    let discrete_q: f64 = row.iter().zip(p.entries()).map(|(a, b)| a * b).sum();
    let discrete_sum: f64 = row.iter().zip(p.entries()).map(|(a, b)| a * f.phi(*b)).sum();
    let gap = f.phi(discrete_q) - discrete_sum;
    let jensen_margin = match f.case() {
        Case::IncreasingConcave => gap,
        Case::DecreasingConvex => -gap,
    };
    Ok(JensenOracle {
        integral_f,
        integral_phi_f,
        discrete_q,
        discrete_sum,
        jensen_margin,
    })
}
