//! Entropic functional pairs `(h, φ)`.
//!
//! An entropy is `h(Σ φ(p_i))` where either `h` is strictly increasing and `φ`
//! strictly concave, or `h` is strictly decreasing and `φ` strictly convex,
//! with `φ(0) = 0` and `h(φ(1)) = 0`.
//!
//! Built-in families are Shannon, Rényi, Tsallis (Havrda–Charvát) and
//! Kaniadakis. Anything else, including the unified family, goes through
//! [`EntropicFunctional::custom`] and should be checked with
//! [`validate_functional`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `h(φ(1)) = 0` and on the midpoint curvature test.
pub const FUNCTIONAL_TOL: f64 = 1e-12;

/// Default number of grid points used by [`validate_functional`].
pub const DEFAULT_GRID: usize = 1001;

/// Which monotonicity/curvature pairing a functional belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `h` strictly increasing, `φ` strictly concave.
    IncreasingConcave,
    /// `h` strictly decreasing, `φ` strictly convex.
    DecreasingConvex,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::IncreasingConcave => f.write_str("increasing-concave"),
            Case::DecreasingConvex => f.write_str("decreasing-convex"),
        }
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The concrete formula behind a functional.
#[derive(Clone)]
pub enum Family {
    Shannon,
    Renyi { alpha: f64 },
    Tsallis { q: f64 },
    Kaniadakis { kappa: f64 },
    Custom { phi: ScalarFn, h: ScalarFn },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Shannon => f.write_str("Shannon"),
            Family::Renyi { alpha } => write!(f, "Renyi {{ alpha: {alpha} }}"),
            Family::Tsallis { q } => write!(f, "Tsallis {{ q: {q} }}"),
            Family::Kaniadakis { kappa } => write!(f, "Kaniadakis {{ kappa: {kappa} }}"),
            Family::Custom { .. } => f.write_str("Custom"),
        }
    }
}

/// An `(h, φ)` pair together with its case flag and named parameters.
///
/// Immutable once built; cloning is cheap.
#[derive(Clone, Debug)]
pub struct EntropicFunctional {
    name: String,
    family: Family,
    case: Case,
    params: Vec<(String, f64)>,
}

impl EntropicFunctional {
    /// `φ(x) = −x ln x`, `h = id`.
    pub fn shannon() -> Self {
        Self {
            name: "shannon".into(),
            family: Family::Shannon,
            case: Case::IncreasingConcave,
            params: Vec::new(),
        }
    }

    /// `φ(x) = x^α`, `h(y) = ln(y) / (1 − α)`.
    pub fn renyi(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be positive and finite",
            });
        }
        if alpha == 1.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "alpha = 1 is the Shannon limit, use shannon",
            });
        }
        let case = if alpha < 1.0 {
            Case::IncreasingConcave
        } else {
            Case::DecreasingConvex
        };
        Ok(Self {
            name: format!("renyi:alpha={alpha}"),
            family: Family::Renyi { alpha },
            case,
            params: vec![("alpha".into(), alpha)],
        })
    }

    /// `φ(x) = (x − x^q) / (q − 1)`, `h = id`.
    pub fn tsallis(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter {
                name: "q",
                value: q,
                reason: "must be positive and finite",
            });
        }
        if q == 1.0 {
            return Err(Error::InvalidParameter {
                name: "q",
                value: q,
                reason: "q = 1 is the Shannon limit, use shannon",
            });
        }
        Ok(Self {
            name: format!("tsallis:q={q}"),
            family: Family::Tsallis { q },
            case: Case::IncreasingConcave,
            params: vec![("q".into(), q)],
        })
    }

    /// `φ(x) = (x^{1−κ} − x^{1+κ}) / (2κ)`, `h = id`.
    pub fn kaniadakis(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa != 0.0 && kappa.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "must satisfy 0 < |kappa| < 1",
            });
        }
        Ok(Self {
            name: format!("kaniadakis:kappa={kappa}"),
            family: Family::Kaniadakis { kappa },
            case: Case::IncreasingConcave,
            params: vec![("kappa".into(), kappa)],
        })
    }

    /// Wraps an arbitrary pair. Nothing is checked here; run
    /// [`validate_functional`] before trusting the result.
    pub fn custom<P, H>(name: impl Into<String>, phi: P, h: H, case: Case) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            family: Family::Custom {
                phi: Arc::new(phi),
                h: Arc::new(h),
            },
            case,
            params: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self.family, Family::Custom { .. })
    }

    /// Evaluates `φ(x)`. Built-ins return exactly 0 at `x = 0`.
    pub fn phi(&self, x: f64) -> f64 {
        match &self.family {
            Family::Custom { phi, .. } => phi(x),
            _ if x == 0.0 => 0.0,
            Family::Shannon => -x * x.ln(),
            Family::Renyi { alpha } => x.powf(*alpha),
            Family::Tsallis { q } => (x - x.powf(*q)) / (q - 1.0),
            Family::Kaniadakis { kappa } => {
                (x.powf(1.0 - kappa) - x.powf(1.0 + kappa)) / (2.0 * kappa)
            }
        }
    }

    /// Evaluates the outer function `h(y)`.
    pub fn h(&self, y: f64) -> f64 {
        match &self.family {
            Family::Custom { h, .. } => h(y),
            Family::Renyi { alpha } => y.ln() / (1.0 - alpha),
            Family::Shannon | Family::Tsallis { .. } | Family::Kaniadakis { .. } => y,
        }
    }
}

impl fmt::Display for EntropicFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Parses `shannon`, `renyi:alpha=2`, `tsallis:q=1.5`, `kaniadakis:kappa=0.3`.
impl FromStr for EntropicFunctional {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |msg: &str| Error::FunctionalSpec(spec.to_string(), msg.to_string());
        let (family, rest) = match spec.split_once(':') {
            Some((f, r)) => (f.trim(), Some(r)),
            None => (spec, None),
        };
        let mut params: Vec<(&str, f64)> = Vec::new();
        if let Some(rest) = rest {
            for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| bad("parameters must look like key=value"))?;
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| bad("parameter value is not a number"))?;
                params.push((k.trim(), v));
            }
        }
        let expect_one = |key: &str| -> Result<f64> {
            match params.as_slice() {
                [(k, v)] if *k == key => Ok(*v),
                [] => Err(bad(&format!("missing parameter {key}"))),
                _ => Err(bad(&format!("expected exactly one parameter {key}"))),
            }
        };
        match family.to_ascii_lowercase().as_str() {
            "shannon" => {
                if params.is_empty() {
                    Ok(Self::shannon())
                } else {
                    Err(bad("shannon takes no parameters"))
                }
            }
            "renyi" => Self::renyi(expect_one("alpha")?),
            "tsallis" => Self::tsallis(expect_one("q")?),
            "kaniadakis" => Self::kaniadakis(expect_one("kappa")?),
            _ => Err(bad("unknown family")),
        }
    }
}

/// Parameter schema of a built-in family, for listings.
#[derive(Debug, Clone, Serialize)]
pub struct FamilySchema {
    pub name: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub phi: &'static str,
    pub h: &'static str,
}

pub const BUILTIN_FAMILIES: &[FamilySchema] = &[
    FamilySchema {
        name: "shannon",
        params: &[],
        phi: "-x ln x",
        h: "y",
    },
    FamilySchema {
        name: "renyi",
        params: &[("alpha", "alpha > 0, alpha != 1")],
        phi: "x^alpha",
        h: "ln(y) / (1 - alpha)",
    },
    FamilySchema {
        name: "tsallis",
        params: &[("q", "q > 0, q != 1")],
        phi: "(x - x^q) / (q - 1)",
        h: "y",
    },
    FamilySchema {
        name: "kaniadakis",
        params: &[("kappa", "0 < |kappa| < 1")],
        phi: "(x^(1-kappa) - x^(1+kappa)) / (2 kappa)",
        h: "y",
    },
];

/// A representative set covering every built-in family and both cases.
pub fn default_functionals() -> Vec<EntropicFunctional> {
    [
        "shannon",
        "renyi:alpha=0.5",
        "renyi:alpha=2",
        "tsallis:q=0.5",
        "tsallis:q=2",
        "kaniadakis:kappa=0.3",
    ]
    .iter()
    .map(|s| s.parse().expect("built-in spec"))
    .collect()
}

/// One line of a [`ValidationReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCheck {
    pub name: String,
    pub passed: bool,
    /// Smallest observed slack; negative means the condition was violated.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub functional: String,
    pub case: Case,
    pub grid_size: usize,
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Grid checks of the defining conditions: `φ(0) = 0`, `|h(φ(1))| ≤ 1e-12`,
/// midpoint concavity/convexity of `φ` over all grid pairs, and strict
/// monotonicity of `h` over the range `Σφ` sweeps between a point mass and
/// the uniform vector on `grid_size` outcomes.
pub fn validate_functional(f: &EntropicFunctional, grid_size: usize) -> Result<ValidationReport> {
    if grid_size < 3 {
        return Err(Error::InvalidArgument(format!(
            "grid_size must be at least 3, got {grid_size}"
        )));
    }
    let mut checks = Vec::with_capacity(4);

    let phi0 = f.phi(0.0);
    checks.push(ValidationCheck {
        name: "phi_zero".into(),
        passed: phi0 == 0.0,
        worst_margin: if phi0.is_nan() { f64::NEG_INFINITY } else { -phi0.abs() },
    });

    let h_phi1 = f.h(f.phi(1.0));
    let slack = if h_phi1.is_nan() {
        f64::NEG_INFINITY
    } else {
        FUNCTIONAL_TOL - h_phi1.abs()
    };
    checks.push(ValidationCheck {
        name: "h_phi_one".into(),
        passed: slack >= 0.0,
        worst_margin: slack,
    });

    // Midpoint test over every grid pair x < y, signed so that positive means
    // the declared curvature holds.
    let step = 1.0 / (grid_size - 1) as f64;
    let grid: Vec<f64> = (0..grid_size).map(|i| i as f64 * step).collect();
    let values: Vec<f64> = grid.iter().map(|&x| f.phi(x)).collect();
    let sign = match f.case {
        Case::IncreasingConcave => 1.0,
        Case::DecreasingConvex => -1.0,
    };
    let mut worst = f64::INFINITY;
    for i in 0..grid_size {
        for j in (i + 1)..grid_size {
            let mid = f.phi(0.5 * (grid[i] + grid[j]));
            let m = sign * (mid - 0.5 * (values[i] + values[j]));
            if m.is_nan() {
                worst = f64::NEG_INFINITY;
            } else if m < worst {
                worst = m;
            }
        }
    }
    checks.push(ValidationCheck {
        name: match f.case {
            Case::IncreasingConcave => "phi_concave".into(),
            Case::DecreasingConvex => "phi_convex".into(),
        },
        passed: worst > -FUNCTIONAL_TOL,
        worst_margin: worst,
    });

    let y_pure = f.phi(1.0);
    let y_uniform = grid_size as f64 * f.phi(1.0 / grid_size as f64);
    let (lo, hi) = if y_pure <= y_uniform {
        (y_pure, y_uniform)
    } else {
        (y_uniform, y_pure)
    };
    let dy = (hi - lo) / (grid_size - 1) as f64;
    let mut worst = f64::INFINITY;
    let mut prev = f.h(lo);
    for k in 1..grid_size {
        let y = if k == grid_size - 1 { hi } else { lo + k as f64 * dy };
        let cur = f.h(y);
        let m = sign * (cur - prev);
        if m.is_nan() {
            worst = f64::NEG_INFINITY;
        } else if m < worst {
            worst = m;
        }
        prev = cur;
    }
    checks.push(ValidationCheck {
        name: match f.case {
            Case::IncreasingConcave => "h_increasing".into(),
            Case::DecreasingConvex => "h_decreasing".into(),
        },
        passed: worst > 0.0,
        worst_margin: worst,
    });

    Ok(ValidationReport {
        functional: f.name.clone(),
        case: f.case,
        grid_size,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_builtins() -> Vec<EntropicFunctional> {
        default_functionals()
    }

    #[test]
    fn shannon_values() {
        let s = EntropicFunctional::shannon();
        assert_eq!(s.phi(1.0), 0.0);
        assert_eq!(s.phi(0.0), 0.0);
        assert!((s.phi(0.5) - 0.346_573_590_279_972_6).abs() < 1e-15);
        assert_eq!(s.case(), Case::IncreasingConcave);
    }

    #[test]
    fn renyi_values_and_case() {
        let r2 = EntropicFunctional::renyi(2.0).unwrap();
        assert_eq!(r2.case(), Case::DecreasingConvex);
        assert_eq!(r2.h(r2.phi(1.0)), 0.0);
        let uniform = r2.h(r2.phi(0.5) + r2.phi(0.5));
        assert!((uniform - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(
            EntropicFunctional::renyi(0.5).unwrap().case(),
            Case::IncreasingConcave
        );
    }

    #[test]
    fn renyi_rejects_bad_alpha() {
        for a in [0.0, -1.0, 1.0, f64::NAN, f64::INFINITY] {
            assert!(EntropicFunctional::renyi(a).is_err(), "alpha={a}");
        }
    }

    #[test]
    fn tsallis_values() {
        let t2 = EntropicFunctional::tsallis(2.0).unwrap();
        assert_eq!(t2.phi(1.0), 0.0);
        assert!((t2.phi(0.5) + t2.phi(0.5) - 0.5).abs() < 1e-15);
        let t3 = EntropicFunctional::tsallis(3.0).unwrap();
        assert_eq!(t3.h(t3.phi(1.0) + t3.phi(0.0)), 0.0);
        assert!(EntropicFunctional::tsallis(1.0).is_err());
        assert!(EntropicFunctional::tsallis(-0.5).is_err());
    }

    #[test]
    fn kaniadakis_values() {
        let k = EntropicFunctional::kaniadakis(0.5).unwrap();
        assert_eq!(k.phi(1.0), 0.0);
        assert_eq!(k.phi(0.0), 0.0);
        assert!((k.phi(0.25) - 0.375).abs() < 1e-15);
        for bad in [0.0, 1.0, -1.0, 1.5] {
            assert!(EntropicFunctional::kaniadakis(bad).is_err(), "kappa={bad}");
        }
        assert!(EntropicFunctional::kaniadakis(-0.3).is_ok());
    }

    #[test]
    fn custom_shannon_matches_builtin() {
        let c = EntropicFunctional::custom(
            "my-shannon",
            |x: f64| if x == 0.0 { 0.0 } else { -x * x.ln() },
            |y| y,
            Case::IncreasingConcave,
        );
        let s = EntropicFunctional::shannon();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert_eq!(c.phi(x), s.phi(x));
            assert_eq!(c.h(x), s.h(x));
        }
        assert!(validate_functional(&c, 101).unwrap().passed());
    }

    #[test]
    fn custom_renyi2_clone_matches_builtin() {
        let c = EntropicFunctional::custom("sq", |x| x * x, |y: f64| -y.ln(), Case::DecreasingConvex);
        let r = EntropicFunctional::renyi(2.0).unwrap();
        let report = validate_functional(&c, 101).unwrap();
        assert!(report.passed(), "{report:?}");
        for i in 1..=50 {
            let p = i as f64 / 100.0;
            let y = c.phi(p) + c.phi(1.0 - p);
            let yr = r.phi(p) + r.phi(1.0 - p);
            assert!((c.h(y) - r.h(yr)).abs() < 1e-12);
        }
    }

    #[test]
    fn miscased_custom_fails_concavity() {
        let c = EntropicFunctional::custom("x2", |x| x * x, |y| y, Case::IncreasingConcave);
        let report = validate_functional(&c, 101).unwrap();
        assert!(!report.passed());
        let curv = report.check("phi_concave").unwrap();
        assert!(!curv.passed);
        // widest pair (0, 1): φ(1/2) − (φ(0)+φ(1))/2 = 1/4 − 1/2
        assert!((curv.worst_margin + 0.25).abs() < 1e-15);
        assert!(report.check("h_increasing").unwrap().passed);
    }

    #[test]
    fn builtins_pass_validation() {
        for f in all_builtins() {
            let report = validate_functional(&f, 101).unwrap();
            assert!(report.passed(), "{}: {report:?}", f.name());
        }
        let r2 = validate_functional(&EntropicFunctional::renyi(2.0).unwrap(), 101).unwrap();
        assert_eq!(r2.case, Case::DecreasingConvex);
        assert!(r2.check("phi_convex").is_some());
    }

    #[test]
    fn validation_rejects_tiny_grid() {
        assert!(validate_functional(&EntropicFunctional::shannon(), 2).is_err());
    }

    #[test]
    fn phi_nonzero_at_origin_is_reported() {
        let c = EntropicFunctional::custom("shift", |x: f64| 0.1 + x.sqrt(), |y| y - 1.1, Case::IncreasingConcave);
        let report = validate_functional(&c, 11).unwrap();
        assert!(!report.check("phi_zero").unwrap().passed);
    }

    #[test]
    fn parse_specs() {
        let f: EntropicFunctional = "renyi:alpha=2".parse().unwrap();
        assert_eq!(f.param("alpha"), Some(2.0));
        let f: EntropicFunctional = "tsallis:q=1.5".parse().unwrap();
        assert_eq!(f.param("q"), Some(1.5));
        let f: EntropicFunctional = "kaniadakis:kappa=0.3".parse().unwrap();
        assert_eq!(f.param("kappa"), Some(0.3));
        assert_eq!("shannon".parse::<EntropicFunctional>().unwrap().name(), "shannon");
        for bad in [
            "renyi:alpha=1",
            "renyi",
            "renyi:q=2",
            "renyi:alpha=x",
            "shannon:a=1",
            "unified:r=1",
            "tsallis:q=2,q=3",
            "kaniadakis:kappa",
        ] {
            assert!(bad.parse::<EntropicFunctional>().is_err(), "{bad}");
        }
    }

    #[test]
    fn builtin_registry_lists_four_families() {
        let names: Vec<_> = BUILTIN_FAMILIES.iter().map(|f| f.name).collect();
        assert_eq!(names, ["shannon", "renyi", "tsallis", "kaniadakis"]);
    }

    #[test]
    fn splitting_is_subadditive_for_concave_superadditive_for_convex() {
        let n = 60;
        for f in all_builtins() {
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let a = i as f64 / n as f64;
                    let b = j as f64 / n as f64;
                    let split = f.phi(a) + f.phi(b);
                    let merged = f.phi(a + b);
                    match f.case() {
                        Case::IncreasingConcave => assert!(split >= merged - 1e-12, "{f} {a} {b}"),
                        Case::DecreasingConvex => assert!(split <= merged + 1e-12, "{f} {a} {b}"),
                    }
                }
            }
        }
    }
}
