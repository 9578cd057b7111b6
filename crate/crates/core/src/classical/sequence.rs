use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::classical::{EntropyResult, EntropyStatus, ProbVector};
use crate::error::{Error, Result};
use crate::functionals::{Case, EntropicFunctional, Family};

/// Number of trailing terms over which the partial-sum increment is measured.
pub const WINDOW: usize = 64;

const MONOTONE_SLACK: f64 = 1e-15;

/// Closed-form knowledge about the part of a sequence not yet summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailDescriptor {
    /// `p_k = (1 − r) r^k` for `k ≥ 0`.
    Geometric { ratio: f64 },
    /// `p_k = 0` for every `k ≥ len`.
    FiniteSupport { len: usize },
}

impl TailDescriptor {
    /// `Σ_{k ≥ n} φ(p_k)` when it is known in closed form for `f`.
    pub fn remainder(&self, f: &EntropicFunctional, n: usize) -> Option<f64> {
        match *self {
            TailDescriptor::FiniteSupport { len } => (n >= len).then_some(0.0),
            TailDescriptor::Geometric { ratio: r } => {
                let a = 1.0 - r;
                let nf = n as f64;
                let rn = r.powf(nf);
                // Σ_{k≥n} (a r^k)^β
                let power_tail = |beta: f64| a.powf(beta) * r.powf(nf * beta) / (1.0 - r.powf(beta));
                match f.family() {
                    Family::Shannon => {
                        // Σ_{k≥n} k r^k = r^n (n(1−r) + r) / (1−r)²
                        let weighted = rn * (nf * (1.0 - r) + r) / (a * a);
                        Some(-a.ln() * rn - a * r.ln() * weighted)
                    }
                    Family::Renyi { alpha } => Some(power_tail(*alpha)),
                    Family::Tsallis { q } => Some((rn - power_tail(*q)) / (q - 1.0)),
                    Family::Kaniadakis { kappa } => {
                        Some((power_tail(1.0 - kappa) - power_tail(1.0 + kappa)) / (2.0 * kappa))
                    }
                    Family::Custom { .. } => None,
                }
            }
        }
    }
}

/// An index-addressable probability sequence `p_0, p_1, …`.
#[derive(Clone)]
pub struct SequenceSource {
    label: String,
    generator: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    declared_monotone: bool,
    tail: Option<TailDescriptor>,
}

impl fmt::Debug for SequenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceSource")
            .field("label", &self.label)
            .field("declared_monotone", &self.declared_monotone)
            .field("tail", &self.tail)
            .finish()
    }
}

impl SequenceSource {
    pub fn new<G>(label: impl Into<String>, generator: G, declared_monotone: bool) -> Self
    where
        G: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            generator: Arc::new(generator),
            declared_monotone,
            tail: None,
        }
    }

    pub fn with_tail(mut self, tail: TailDescriptor) -> Self {
        self.tail = Some(tail);
        self
    }

    /// `p_k = (1 − r) r^k`.
    pub fn geometric(ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: ratio,
                reason: "must satisfy 0 < r < 1",
            });
        }
        let a = 1.0 - ratio;
        Ok(
            Self::new(format!("geometric:r={ratio}"), move |k| a * ratio.powi(k as i32), true)
                .with_tail(TailDescriptor::Geometric { ratio }),
        )
    }

    /// `p_k = (k + 1)^{-s} / ζ(s)`.
    pub fn zeta(s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 1.0) {
            return Err(Error::InvalidParameter {
                name: "s",
                value: s,
                reason: "must be finite and greater than 1",
            });
        }
        let z = riemann_zeta(s);
        Ok(Self::new(
            format!("zeta:s={s}"),
            move |k| ((k + 1) as f64).powf(-s) / z,
            true,
        ))
    }

    /// `p_k ∝ 1 / (n ln² n)` with `n = k + 2`. Summable, but `Σ −p ln p`
    /// diverges.
    pub fn log_squared() -> Self {
        let z = log_squared_normalizer();
        Self::new(
            "log-squared",
            move |k| {
                let n = (k + 2) as f64;
                let l = n.ln();
                1.0 / (z * n * l * l)
            },
            true,
        )
    }

    /// A finite vector continued by zeros.
    pub fn finite(p: &ProbVector) -> Self {
        let entries: Vec<f64> = p.entries().to_vec();
        let len = entries.len();
        let monotone = entries.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
        Self::new("finite", move |k| entries.get(k).copied().unwrap_or(0.0), monotone)
            .with_tail(TailDescriptor::FiniteSupport { len })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn declared_monotone(&self) -> bool {
        self.declared_monotone
    }

    pub fn tail(&self) -> Option<TailDescriptor> {
        self.tail
    }

    pub fn p(&self, k: usize) -> f64 {
        (self.generator)(k)
    }

    /// The first `n` terms.
    pub fn take(&self, n: usize) -> Vec<f64> {
        (0..n).map(|k| self.p(k)).collect()
    }
}

/// Parses `geometric:r=0.5`, `zeta:s=2`, `log-squared`.
impl FromStr for SequenceSource {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |msg: &str| Error::SequenceSpec(spec.to_string(), msg.to_string());
        let (family, rest) = match spec.split_once(':') {
            Some((f, r)) => (f.trim(), r.trim()),
            None => (spec, ""),
        };
        let single = |key: &str| -> Result<f64> {
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| bad(&format!("expected {key}=<value>")))?;
            if k.trim() != key {
                return Err(bad(&format!("expected parameter {key}")));
            }
            v.trim().parse().map_err(|_| bad("parameter value is not a number"))
        };
        match family {
            "geometric" => Self::geometric(single("r")?),
            "zeta" => Self::zeta(single("s")?),
            "log-squared" if rest.is_empty() => Ok(Self::log_squared()),
            "log-squared" => Err(bad("log-squared takes no parameters")),
            _ => Err(bad("unknown sequence family")),
        }
    }
}

/// Sums `φ(p_k)` lazily.
///
/// Stops with [`EntropyStatus::Exact`] once the analytic tail (if any) is
/// below `increment_tol`, with [`EntropyStatus::TruncatedEstimate`] once the
/// partial sum moves less than `increment_tol` over the last [`WINDOW`]
/// terms, and otherwise after `max_terms`. Running out of terms counts as
/// divergence for increasing-concave functionals only; for the convex case
/// `Σ φ(p_k)` is dominated by `Σ p_k` and the truncated value is returned.
pub fn entropy_sequence(
    src: &SequenceSource,
    f: &EntropicFunctional,
    max_terms: usize,
    increment_tol: f64,
) -> Result<EntropyResult> {
    if max_terms == 0 {
        return Err(Error::InvalidArgument("max_terms must be at least 1".into()));
    }
    if increment_tol.is_nan() || increment_tol <= 0.0 {
        return Err(Error::InvalidArgument("increment_tol must be positive".into()));
    }
    let mut history = [0.0f64; WINDOW];
    let mut partial = 0.0;
    let mut prev_p = f64::INFINITY;
    let mut last_increment = f64::INFINITY;
    for k in 0..max_terms {
        let p = src.p(k);
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::EntryOutOfRange { index: k, value: p });
        }
        if src.declared_monotone && p > prev_p + MONOTONE_SLACK {
            return Err(Error::InvalidArgument(format!(
                "sequence {} declared monotone but p_{k} = {p} > p_{} = {prev_p}",
                src.label,
                k - 1
            )));
        }
        prev_p = p;

        let back = history[k % WINDOW];
        partial += f.phi(p);
        history[k % WINDOW] = partial;
        let terms = k + 1;

        if let Some(rem) = src.tail.and_then(|t| t.remainder(f, terms)) {
            if rem.abs() < increment_tol {
                return Ok(EntropyResult {
                    value: f.h(partial + rem),
                    status: EntropyStatus::Exact,
                    terms_used: terms,
                    increment_at_stop: rem.abs(),
                });
            }
        }
        if terms >= WINDOW {
            last_increment = (partial - back).abs();
            if last_increment < increment_tol {
                return Ok(EntropyResult {
                    value: f.h(partial),
                    status: EntropyStatus::TruncatedEstimate,
                    terms_used: terms,
                    increment_at_stop: last_increment,
                });
            }
        }
    }
    Ok(match f.case() {
        Case::IncreasingConcave => EntropyResult {
            value: f64::INFINITY,
            status: EntropyStatus::DeclaredDivergent,
            terms_used: max_terms,
            increment_at_stop: last_increment,
        },
        Case::DecreasingConvex => EntropyResult {
            value: f.h(partial),
            status: EntropyStatus::TruncatedEstimate,
            terms_used: max_terms,
            increment_at_stop: last_increment,
        },
    })
}

/// Euler–Maclaurin: direct sum to N−1, integral tail, three correction terms.
fn riemann_zeta(s: f64) -> f64 {
    const N: usize = 1000;
    let direct: f64 = (1..N).map(|n| (n as f64).powf(-s)).sum();
    let n = N as f64;
    direct + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
}

/// `Σ_{n ≥ 2} 1 / (n ln² n)` by Euler–Maclaurin with `∫_N^∞ = 1 / ln N`.
fn log_squared_normalizer() -> f64 {
    const N: usize = 1000;
    let f = |x: f64| 1.0 / (x * x.ln().powi(2));
    let df = |x: f64| -(x.ln() + 2.0) / (x * x * x.ln().powi(3));
    let direct: f64 = (2..N).map(|n| f(n as f64)).sum();
    let n = N as f64;
    direct + 1.0 / n.ln() + 0.5 * f(n) - df(n) / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn zeta_normalizer_matches_basel() {
        assert!((riemann_zeta(2.0) - PI * PI / 6.0).abs() < 1e-12);
        assert!((riemann_zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-12);
    }

    #[test]
    fn log_squared_normalizer_against_brute_force() {
        // Direct sum to 2e6 plus the integral tail 1/ln(N + 1/2).
        let n = 2_000_000usize;
        let brute: f64 = (2..=n).map(|k| {
            let x = k as f64;
            1.0 / (x * x.ln().powi(2))
        }).sum::<f64>() + 1.0 / ((n as f64) + 0.5).ln();
        assert!((log_squared_normalizer() - brute).abs() < 1e-8);
    }

    #[test]
    fn geometric_tail_remainders_match_brute_force() {
        let src = SequenceSource::geometric(0.7).unwrap();
        let tail = src.tail().unwrap();
        for f in crate::functionals::default_functionals() {
            for n in [0usize, 3, 17] {
                let brute: f64 = (n..4000).map(|k| f.phi(src.p(k))).sum();
                let closed = tail.remainder(&f, n).unwrap();
                assert!((brute - closed).abs() < 1e-11, "{f} n={n}: {brute} vs {closed}");
            }
        }
    }

    #[test]
    fn geometric_half_closed_forms() {
        let src = SequenceSource::geometric(0.5).unwrap();
        let s = entropy_sequence(&src, &EntropicFunctional::shannon(), 10_000, 1e-12).unwrap();
        assert_eq!(s.status, EntropyStatus::Exact);
        assert!((s.value - 2.0 * LN_2).abs() < 1e-12);
        let r = entropy_sequence(&src, &EntropicFunctional::renyi(2.0).unwrap(), 10_000, 1e-12)
            .unwrap();
        assert_eq!(r.status, EntropyStatus::Exact);
        assert!((r.value - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn pure_point_sequence_is_exact_zero() {
        let src = SequenceSource::finite(&ProbVector::new(vec![1.0, 0.0, 0.0]).unwrap());
        for f in crate::functionals::default_functionals() {
            let r = entropy_sequence(&src, &f, 100, 1e-12).unwrap();
            assert_eq!(r.status, EntropyStatus::Exact);
            assert!(r.value.abs() <= 1e-12);
        }
    }

    #[test]
    fn custom_functional_on_geometric_is_truncated_estimate() {
        let f = EntropicFunctional::custom(
            "sh",
            |x: f64| if x == 0.0 { 0.0 } else { -x * x.ln() },
            |y| y,
            Case::IncreasingConcave,
        );
        let src = SequenceSource::geometric(0.5).unwrap();
        let r = entropy_sequence(&src, &f, 10_000, 1e-12).unwrap();
        assert_eq!(r.status, EntropyStatus::TruncatedEstimate);
        assert!((r.value - 2.0 * LN_2).abs() < 1e-11);
    }

    #[test]
    fn heavy_tail_is_declared_divergent_under_shannon() {
        let r = entropy_sequence(
            &SequenceSource::log_squared(),
            &EntropicFunctional::shannon(),
            10_000,
            1e-12,
        )
        .unwrap();
        assert_eq!(r.status, EntropyStatus::DeclaredDivergent);
        assert_eq!(r.value, f64::INFINITY);
        assert_eq!(r.terms_used, 10_000);
    }

    #[test]
    fn convex_case_never_diverges() {
        for spec in ["renyi:alpha=2", "renyi:alpha=1.5"] {
            let f: EntropicFunctional = spec.parse().unwrap();
            let r = entropy_sequence(&SequenceSource::log_squared(), &f, 5_000, 1e-12).unwrap();
            assert_ne!(r.status, EntropyStatus::DeclaredDivergent);
            assert!(r.value.is_finite());
        }
    }

    #[test]
    fn monotone_declaration_is_enforced() {
        let src = SequenceSource::new("bad", |k| if k == 3 { 0.2 } else { 0.1 / (k + 1) as f64 }, true);
        assert!(entropy_sequence(&src, &EntropicFunctional::shannon(), 100, 1e-12).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        let src = SequenceSource::geometric(0.5).unwrap();
        let s = EntropicFunctional::shannon();
        assert!(entropy_sequence(&src, &s, 0, 1e-12).is_err());
        assert!(entropy_sequence(&src, &s, 10, 0.0).is_err());
    }

    #[test]
    fn parses_specs() {
        assert!("geometric:r=0.5".parse::<SequenceSource>().is_ok());
        assert!("zeta:s=2".parse::<SequenceSource>().is_ok());
        assert!("log-squared".parse::<SequenceSource>().is_ok());
        for bad in ["geometric:r=1.5", "geometric", "zeta:s=1", "poisson:l=1", "geometric:q=0.5"] {
            assert!(bad.parse::<SequenceSource>().is_err(), "{bad}");
        }
    }
}
