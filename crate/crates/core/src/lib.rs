//! Exact invariants of plane curve singularities.
//!
//! The crate computes, with exact rational and cyclotomic arithmetic,
//! Puiseux expansions of eigenvalues of matrices over truncated power series,
//! their root valuation data, per-branch characteristic exponents and pairs,
//! intersection numbers, and the local invariants μ, τ, δ of a plane germ.
//! Truncated data is tracked explicitly: anything that more terms could change
//! is reported as insufficient precision instead of being guessed.

#![allow(clippy::needless_range_loop)]

pub mod branch;
pub mod certificate;
pub mod cyclotomic;
pub mod disc;
pub mod error;
pub mod linalg;
pub mod local;
pub mod poly;
pub mod puiseux;
pub mod resultant;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod spectral;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, ErrorClass, Result};
pub use poly::SparsePoly;
pub use scalar::{Field, Rational};
pub use series::{PuiseuxSeries, Valuation};

/// Polynomial with rational coefficients.
pub type QPoly = SparsePoly<Rational>;
/// Puiseux series with cyclotomic coefficients.
pub type Series = PuiseuxSeries<Cyclotomic>;
