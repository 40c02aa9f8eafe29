//! Exact computations for hypertoric Deligne-Mumford stacks.
//!
//! The crate follows the data flow of a stacky hyperplane arrangement
//! `(N, beta, theta)`:
//!
//! - [`exactalg`]: Smith normal form, kernels and Gale duality over the integers.
//! - [`arrangement`]: genericity, the lifting `psi`, chambers and the core.
//! - [`multifan`]: the multi-fan, matroid circuits and box elements.
//! - [`lawrence`]: the Lawrence fan and the pairing `l(c1, c2)`.
//! - [`crring`]: polynomials and the Chen-Ruan ring presentations and product.
//! - [`localize`]: fixed-point localization on `T*P^n_w` and Steinberg operators.
//! - [`quantum`]: quantum multiplication by divisors and the quantum
//!   Stanley-Reisner ring.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`).

pub mod arrangement;
pub mod crring;
pub mod error;
pub mod exactalg;
pub mod lawrence;
pub mod localize;
pub mod multifan;
pub mod parallel;
pub mod quantum;

pub use error::{Error, Result};

/// Arbitrary precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Arbitrary precision rational used throughout.
pub type Rat = num_rational::BigRational;
