//! Randomized inequality audits.
//!
//! Each suite draws `trials` independent instances, evaluates both sides of
//! an inequality for every functional, and records the signed margin
//! (positive = the inequality holds). A record is a violation when its
//! margin falls below `-tolerance`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{
    entropy_finite, entropy_of_weights, jensen_step_oracle, majorization_margin,
    BistochasticMatrix, MAJORIZATION_TOL,
};
use crate::error::{Error, Result};
use crate::functionals::EntropicFunctional;
use crate::gpt::{enumerate_basic_decompositions, gpt_entropy, gpt_majorant, ConvexModel, BARYCENTER_TOL};
use crate::quantum::{
    conjugate_isometry, inf_ensemble_entropy, pinch, pinching_inequality_audit, quantum_entropy,
    random_ensemble_with_rng, DensityOperator, PINCHING_TOL,
};
use crate::random::{
    random_density_with_rank, random_isometry, random_prob_vector, random_unitary, trial_rng,
};

/// Slack on `H(Qp) ≥ H(p)` and on ensemble entropies.
pub const SCHUR_TOL: f64 = 1e-9;
/// Slack on the step-function integrals and the per-row Jensen inequality.
pub const JENSEN_TOL: f64 = 1e-12;
/// Allowed entropy change under an isometry.
pub const ISOMETRY_ENTROPY_TOL: f64 = 1e-8;

/// One evaluated inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub trial: usize,
    pub dim: usize,
    pub check: String,
    pub functional: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl AuditEntry {
    pub fn new(
        check: &str,
        functional: &str,
        lhs: f64,
        rhs: f64,
        margin: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            trial: 0,
            dim: 0,
            check: check.to_string(),
            functional: functional.to_string(),
            lhs,
            rhs,
            margin,
            tolerance,
            // NaN margins fail
            passed: margin >= -tolerance,
        }
    }

    fn at(mut self, trial: usize, dim: usize) -> Self {
        self.trial = trial;
        self.dim = dim;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Schur,
    Pinching,
    Isometry,
    Ensemble,
    GptArgmin,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Schur,
        Suite::Pinching,
        Suite::Isometry,
        Suite::Ensemble,
        Suite::GptArgmin,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Schur => "schur",
            Suite::Pinching => "pinching",
            Suite::Isometry => "isometry",
            Suite::Ensemble => "ensemble",
            Suite::GptArgmin => "gpt-argmin",
        }
    }

    pub fn default_dims(&self) -> DimRange {
        match self {
            Suite::GptArgmin => DimRange { lo: 1, hi: 4 },
            _ => DimRange { lo: 2, hi: 8 },
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Inclusive dimension range, written `6` or `3:6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRange {
    pub lo: usize,
    pub hi: usize,
}

impl DimRange {
    pub fn single(d: usize) -> Self {
        Self { lo: d, hi: d }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(self.lo..=self.hi)
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}:{}", self.lo, self.hi)
        }
    }
}

impl FromStr for DimRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad dimension range {s:?}"));
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let r = match s.split_once(':') {
            Some((a, b)) => DimRange {
                lo: parse(a)?,
                hi: parse(b)?,
            },
            None => DimRange::single(parse(s)?),
        };
        if r.lo == 0 || r.lo > r.hi {
            return Err(bad());
        }
        Ok(r)
    }
}

#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub dims: DimRange,
    pub functionals: Vec<EntropicFunctional>,
    /// Ensembles per state (ensemble suite) or sampled non-basic
    /// decompositions per point (gpt-argmin).
    pub samples_per_trial: usize,
}

impl AuditConfig {
    pub fn new(suite: Suite, trials: usize, seed: u64) -> Self {
        Self {
            suite,
            trials,
            seed,
            dims: suite.default_dims(),
            functionals: crate::functionals::default_functionals(),
            samples_per_trial: 20,
        }
    }

    pub fn with_dims(mut self, dims: DimRange) -> Self {
        self.dims = dims;
        self
    }

    pub fn with_functionals(mut self, functionals: Vec<EntropicFunctional>) -> Self {
        self.functionals = functionals;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples_per_trial = samples;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub suite: Suite,
    pub trials: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub seed: u64,
    pub dims: DimRange,
    pub functionals: Vec<String>,
    pub records: Vec<AuditEntry>,
}

impl AuditReport {
    fn from_records(config: &AuditConfig, records: Vec<AuditEntry>) -> Self {
        let violations = records.iter().filter(|r| !r.passed).count();
        let worst_margin = records
            .iter()
            .map(|r| r.margin)
            .fold(f64::INFINITY, |a, b| if b.is_nan() || b < a { b } else { a });
        Self {
            suite: config.suite,
            trials: config.trials,
            violations,
            worst_margin,
            seed: config.seed,
            dims: config.dims,
            functionals: config.functionals.iter().map(|f| f.name().to_string()).collect(),
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Records whose check name equals `check`.
    pub fn records_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a AuditEntry> + 'a {
        self.records.iter().filter(move |r| r.check == check)
    }

    /// Largest `|margin|` among records of `check`.
    pub fn max_abs_margin(&self, check: &str) -> f64 {
        self.records_for(check).map(|r| r.margin.abs()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Runs the configured suite; trials run in parallel, each on its own RNG
/// stream, and records are returned in trial order.
pub fn run_audit(config: &AuditConfig) -> Result<AuditReport> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if config.functionals.is_empty() {
        return Err(Error::InvalidArgument("no functionals to audit".into()));
    }
    let per_trial: Vec<Vec<AuditEntry>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<_>>()?;
    Ok(AuditReport::from_records(
        config,
        per_trial.into_iter().flatten().collect(),
    ))
}

fn run_trial(config: &AuditConfig, t: usize) -> Result<Vec<AuditEntry>> {
    let mut rng = trial_rng(config.seed, t as u64);
    match config.suite {
        Suite::Schur => schur_trial(config, t, &mut rng),
        Suite::Pinching => pinching_trial(config, t, &mut rng),
        Suite::Isometry => isometry_trial(config, t, &mut rng),
        Suite::Ensemble => ensemble_trial(config, t, &mut rng),
        Suite::GptArgmin => gpt_trial(config, t, &mut rng),
    }
}

/// Random ρ of random rank, so low-rank and degenerate spectra show up.
fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    let rank = rng.random_range(1..=d);
    random_density_with_rank(d, rank, rng)
}

fn schur_trial<R: Rng + ?Sized>(config: &AuditConfig, t: usize, rng: &mut R) -> Result<Vec<AuditEntry>> {
    let n = config.dims.sample(rng);
    let p = random_prob_vector(n, rng);
    let q = BistochasticMatrix::from_unitary(&random_unitary(n, rng))?;
    let mixed = q.apply(&p)?;
    let mut out = Vec::new();
    for f in &config.functionals {
        let before = entropy_finite(&p, f).value;
        let after = entropy_finite(&mixed, f).value;
        out.push(AuditEntry::new("schur", f.name(), before, after, after - before, SCHUR_TOL).at(t, n));

        let mut worst_integral = 0.0f64;
        let mut worst_direction = f64::INFINITY;
        for i in 0..n {
            let o = jensen_step_oracle(&q.row(i), &p, f)?;
            worst_integral = worst_integral.max(o.integral_error());
            worst_direction = worst_direction.min(o.jensen_margin);
        }
        out.push(
            AuditEntry::new("jensen-integral", f.name(), worst_integral, 0.0, -worst_integral, JENSEN_TOL)
                .at(t, n),
        );
        out.push(
            AuditEntry::new("jensen-direction", f.name(), worst_direction, 0.0, worst_direction, JENSEN_TOL)
                .at(t, n),
        );
    }
    Ok(out)
}

fn pinching_trial<R: Rng + ?Sized>(config: &AuditConfig, t: usize, rng: &mut R) -> Result<Vec<AuditEntry>> {
    let d = config.dims.sample(rng);
    let rho = random_state(d, rng);
    let basis = random_unitary(d, rng);
    let p = pinch(&rho, &basis)?;
    let spec = rho.spectrum().eigenvalues();
    let sh = majorization_margin(spec, p.entries())?;
    let mut out = vec![AuditEntry::new("schur-horn", "-", 0.0, 0.0, sh, MAJORIZATION_TOL).at(t, d)];
    for f in &config.functionals {
        out.push(pinching_inequality_audit(&rho, &basis, f)?.at(t, d));
        let eig = pinching_inequality_audit(&rho, rho.eigenbasis(), f)?;
        out.push(
            AuditEntry::new(
                "pinching-eigenbasis",
                f.name(),
                eig.lhs,
                eig.rhs,
                -(eig.rhs - eig.lhs).abs(),
                PINCHING_TOL,
            )
            .at(t, d),
        );
    }
    Ok(out)
}

fn isometry_trial<R: Rng + ?Sized>(config: &AuditConfig, t: usize, rng: &mut R) -> Result<Vec<AuditEntry>> {
    let d = config.dims.sample(rng);
    let rho = random_state(d, rng);
    let u = random_unitary(d, rng);
    let rotated = conjugate_isometry(&rho, &u)?;
    // every fourth trial also embeds into a larger space
    let embedded = if t.is_multiple_of(4) {
        let big = d + rng.random_range(1..=3);
        Some(conjugate_isometry(&rho, &random_isometry(big, d, rng))?)
    } else {
        None
    };
    let mut out = Vec::new();
    for f in &config.functionals {
        let h = quantum_entropy(&rho, f).value;
        let hu = quantum_entropy(&rotated, f).value;
        out.push(AuditEntry::new("unitary", f.name(), h, hu, -(hu - h).abs(), ISOMETRY_ENTROPY_TOL).at(t, d));
        if let Some(e) = &embedded {
            let he = quantum_entropy(e, f).value;
            out.push(
                AuditEntry::new("embedding", f.name(), h, he, -(he - h).abs(), ISOMETRY_ENTROPY_TOL)
                    .at(t, e.dim()),
            );
        }
    }
    Ok(out)
}

fn ensemble_trial<R: Rng + ?Sized>(config: &AuditConfig, t: usize, rng: &mut R) -> Result<Vec<AuditEntry>> {
    let d = config.dims.sample(rng);
    let rho = random_state(d, rng);
    let r = rho.rank();
    let spec = rho.spectrum().eigenvalues();
    let spectral: Vec<f64> = config.functionals.iter().map(|f| quantum_entropy(&rho, f).value).collect();
    let mut out = Vec::new();
    for _ in 0..config.samples_per_trial {
        let m = rng.random_range(r..=d + 2);
        let ens = random_ensemble_with_rng(&rho, m, rng)?;
        let w = ens.weights().entries();
        out.push(
            AuditEntry::new("ensemble-majorization", "-", 0.0, 0.0, majorization_margin(spec, w)?, MAJORIZATION_TOL)
                .at(t, d),
        );
        for (f, &hs) in config.functionals.iter().zip(&spectral) {
            let hw = entropy_of_weights(w, f);
            out.push(AuditEntry::new("ensemble-entropy", f.name(), hs, hw, hw - hs, SCHUR_TOL).at(t, d));
        }
    }
    let inf_seed: u64 = rng.random();
    for (f, &hs) in config.functionals.iter().zip(&spectral) {
        let inf = inf_ensemble_entropy(&rho, f, d + 2, config.samples_per_trial + 1, inf_seed)?;
        out.push(
            AuditEntry::new("ensemble-infimum", f.name(), hs, inf.value, -(inf.value - hs).abs(), SCHUR_TOL)
                .at(t, d),
        );
    }
    Ok(out)
}

/// Vertices on the unit sphere are always extreme.
fn random_sphere_model<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<ConvexModel> {
    if d == 1 {
        return ConvexModel::new(1, vec![vec![-1.0], vec![1.0]]);
    }
    let n = rng.random_range(d + 1..=12);
    let vertices = (0..n)
        .map(|_| {
            let g: Vec<f64> = (0..d).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            g.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    ConvexModel::new(d, vertices)
}

fn gpt_trial<R: Rng + ?Sized>(config: &AuditConfig, t: usize, rng: &mut R) -> Result<Vec<AuditEntry>> {
    let d = config.dims.sample(rng).clamp(1, 4);
    let model = random_sphere_model(d, rng)?;
    let n = model.len();
    let mix = random_prob_vector(n, rng);
    let x: Vec<f64> = (0..d)
        .map(|j| (0..n).map(|i| mix.entries()[i] * model.vertex(i)[j]).sum())
        .collect();
    let basic = enumerate_basic_decompositions(&model, &x)?;
    let mut out = Vec::new();
    let worst_bary = basic.iter().map(|b| b.barycenter_error(&model, &x)).fold(0.0, f64::max);
    out.push(AuditEntry::new("gpt-barycenter", "-", worst_bary, 0.0, -worst_bary, BARYCENTER_TOL).at(t, d));
    if basic.is_empty() {
        out.push(AuditEntry::new("gpt-feasible", "-", 0.0, 0.0, f64::NEG_INFINITY, 0.0).at(t, d));
        return Ok(out);
    }
    let dense: Vec<Vec<f64>> = basic.iter().map(|b| b.dense_weights(n)).collect();
    // non-basic feasible weights: convex combinations of two basic ones
    let samples: Vec<Vec<f64>> = (0..config.samples_per_trial)
        .map(|_| {
            let a = &dense[rng.random_range(0..dense.len())];
            let b = &dense[rng.random_range(0..dense.len())];
            let s: f64 = rng.random();
            a.iter().zip(b).map(|(u, v)| s * u + (1.0 - s) * v).collect()
        })
        .collect();
    let majorant = gpt_majorant(&model, &x)?;
    for f in &config.functionals {
        let best = gpt_entropy(&model, &x, f)?.value;
        let sampled = samples
            .iter()
            .map(|w| entropy_of_weights(w, f))
            .fold(f64::INFINITY, f64::min);
        out.push(AuditEntry::new("gpt-argmin", f.name(), best, sampled, sampled - best, SCHUR_TOL).at(t, d));
        if let Some(maj) = &majorant {
            let hm = entropy_of_weights(maj, f);
            let lowest = basic.iter().map(|b| b.entropy(f)).fold(f64::INFINITY, f64::min);
            out.push(AuditEntry::new("gpt-majorant", f.name(), hm, lowest, lowest - hm, SCHUR_TOL).at(t, d));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_range_parsing() {
        assert_eq!("6".parse::<DimRange>().unwrap(), DimRange::single(6));
        assert_eq!("3:6".parse::<DimRange>().unwrap(), DimRange { lo: 3, hi: 6 });
        for bad in ["0", "6:3", "a", "2:", ""] {
            assert!(bad.parse::<DimRange>().is_err(), "{bad}");
        }
        assert_eq!(DimRange { lo: 3, hi: 6 }.to_string(), "3:6");
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("unknown".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_small_runs() {
        for suite in Suite::ALL {
            let report = run_audit(&AuditConfig::new(suite, 12, 3).with_samples(5)).unwrap();
            assert_eq!(report.violations, 0, "{suite}: {:?}", report.records.iter().find(|r| !r.passed));
            assert!(!report.records.is_empty());
        }
    }

    #[test]
    fn reports_are_deterministic_and_roundtrip() {
        let cfg = AuditConfig::new(Suite::Pinching, 10, 7).with_dims(DimRange::single(4));
        let a = run_audit(&cfg).unwrap();
        let b = run_audit(&cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let back = AuditReport::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.violations, back.records.iter().filter(|r| r.margin < -r.tolerance).count());
    }

    #[test]
    fn violation_counting() {
        let bad = EntropicFunctional::custom("x2", |x| x * x, |y| y, crate::functionals::Case::IncreasingConcave);
        let cfg = AuditConfig::new(Suite::Schur, 20, 1)
            .with_functionals(vec![bad])
            .with_dims(DimRange::single(4));
        let report = run_audit(&cfg).unwrap();
        assert!(report.violations > 0);
        assert!(report.worst_margin < 0.0);
        assert_eq!(report.violations, report.records.iter().filter(|r| !r.passed).count());
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_audit(&AuditConfig::new(Suite::Schur, 0, 1)).is_err());
    }
}
