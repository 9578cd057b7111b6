//! Generalized `(h, φ)`-entropies `h(Σ φ(p_i))` for finite and infinite
//! probability vectors, density operators and polytope state spaces, plus
//! randomized audits of the majorization inequalities they satisfy.
//!
//! ```
//! use hphi::classical::{entropy_finite, ProbVector};
//! use hphi::functionals::EntropicFunctional;
//!
//! let p = ProbVector::new(vec![0.5, 0.5]).unwrap();
//! let h = entropy_finite(&p, &EntropicFunctional::shannon());
//! assert!((h.value - std::f64::consts::LN_2).abs() < 1e-15);
//! ```

pub mod audit;
pub mod classical;
pub mod error;
pub mod functionals;
pub mod gpt;
pub mod linalg;
pub mod quantum;
pub mod random;

pub use error::{Error, Result};
pub use functionals::{Case, EntropicFunctional};
