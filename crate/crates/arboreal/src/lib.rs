//! Exact arithmetic for the Galois theory of iterated quadratic polynomials
//! `f(x) = (x - gamma)^2 + c`.
//!
//! The crate certifies, level by level, whether the Galois groups of the
//! iterates `f^n` are as large as possible, builds the curves whose rational
//! points parametrize the failures, and carries the supporting machinery:
//! bounded-effort factorization and square classes, exact elliptic curve
//! arithmetic over the rationals, truncated p-adic formal groups with
//! Strassmann zero counting, and the elliptic-logarithm / lattice-reduction
//! pipeline that bounds integral points.

pub mod analytic;
pub mod arith;
pub mod cli;
pub mod curves;
pub mod dynamics;
pub mod galois;
pub mod padic;
pub mod param;
pub mod poly;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

/// Shorthand for building a `BigRational` from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for building a `BigRational` fraction.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
