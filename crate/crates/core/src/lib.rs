//! Exact verification and classification of linear ∞-harmonic maps between
//! Euclidean space, Heisenberg space, Nil and Sol.
//!
//! All residuals live in the ring of exp-polynomials
//! `Σ p(x)·exp(λ·x)` with rational data ([`ExpPoly`]), where the zero test is
//! structural. A map `φ` is ∞-harmonic when `dφ(grad |dφ|²) = 0`;
//! [`PolyMap::tau_infinity`] computes that residual exactly.
//!
//! ```
//! use std::sync::Arc;
//! use infharm::{builtin, GeometryName, PolyMap, RatMatrix};
//!
//! let sol = Arc::new(builtin(GeometryName::Sol).unwrap());
//! let a = RatMatrix::from_ints(&[[2, 0, 0], [0, 3, 0], [0, 0, 1]]);
//! let report = PolyMap::linear(sol.clone(), sol, &a).unwrap().tau_infinity().unwrap();
//! assert!(report.harmonic && report.constant_energy);
//! assert_eq!(report.energy.render(), "14");
//! ```
//!
//! The `examples/` directory has one runnable program per capability.

pub mod classify;
pub mod cli;
pub mod expkernel;
pub mod geometry;
pub mod matrix;
pub mod rational;
pub mod tension;

pub use classify::{classify, coefficient_system, enumerate_equivalence, families, FamilyLabel};
pub use expkernel::{parse, ExpPoly, Frequency, Monomial, Vars};
pub use geometry::{builtin, GeometryName, MetricSpec};
pub use matrix::RatMatrix;
pub use rational::Rational;
pub use tension::{PolyMap, TensionReport};
