//! Exact desk-scale workbench for linear-form densities over finite abelian groups.
//!
//! The crate is organised by subsystem:
//!
//! - [`abelian`]: products of cyclic groups, their elements, and bit-vector subsets
//!   (sumsets, stabilizers, representation counts, additive energy).
//! - [`fourier`]: characters, the expectation-normalised transform, convolution and
//!   the spectral route to additive energy.
//! - [`linform`]: systems of (possibly negated) linear forms, exact and Monte Carlo
//!   densities, and quantum systems (integer combinations of formal products).
//! - [`polynomial`]: sparse integer polynomials and the three reduction transforms.
//! - [`reduction`]: the linear-form encoding of a polynomial, directed Cayley graphs,
//!   the witness construction and its exhaustive verifiers.
//! - [`bounds`]: scalar bound functions and checkers for classical sumset inequalities.
//! - [`cli`]: argument parsing and JSON reports for the `addforms` binary.
//!
//! All counts and densities are exact ([`Rational`]); floating point appears only in
//! the Fourier module and in Monte Carlo estimates.

pub mod abelian;
pub mod bounds;
pub mod cli;
mod error;
pub mod fourier;
pub mod json;
pub mod linform;
pub mod polynomial;
pub mod reduction;
pub mod syntax;

pub use error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

/// Builds the exact rational `num / den`.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
