//! Exact decision procedure for algebraicity of A-hypergeometric (GKZ)
//! systems with rational parameters.
//!
//! The pipeline: validate a configuration ([`asystem`]), compute the facets
//! and a triangulation of its cone ([`cone`]), enumerate apex points and
//! sweep conjugate parameters ([`apex`]). Two independent witnesses back the
//! verdict: polynomial solutions modulo primes ([`modp`]) and truncated
//! formal series over the rationals ([`series`]).

pub mod apex;
pub mod asystem;
pub mod cone;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod scalar;
pub mod series;

use num_rational::BigRational;

pub use apex::{AlgebraicityVerdict, ApexReport, GkzSystem};
pub use asystem::{AConfiguration, ParameterVector};
pub use cone::{FacetSystem, Triangulation};
pub use error::{GkzError, Result};
pub use lattice::{IntMatrix, IntVector, RatVector};
pub use scalar::{Field, Fp};

/// Arbitrary-precision integers.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rationals in lowest terms.
pub type Rat = BigRational;
/// Sparse polynomial with rational coefficients.
pub type RatPoly = poly::SparsePoly<Rat>;
/// Sparse polynomial over a prime field.
pub type FpPoly = poly::SparsePoly<Fp>;
/// Truncated multivariate series with rational coefficients.
pub type RatSeries = series::TruncatedSeries<Rat>;
/// Truncated multivariate series over a prime field.
pub type FpSeries = series::TruncatedSeries<Fp>;
