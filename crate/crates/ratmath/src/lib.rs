//! Exact rational and integer linear algebra for lattice work.
//!
//! Everything here is exact: matrices hold arbitrary-precision rationals
//! (or integers) and no operation rounds. The routines are the ones a
//! lattice-based KEM and its cryptanalysis need:
//!
//! * fraction-free (Bareiss) determinants, inverses and linear solves,
//! * a multi-modular determinant for large integer matrices,
//! * Hermite normal form with a unimodular witness,
//! * integral LLL reduction,
//! * exact lattice-membership tests.

mod bareiss;
mod error;
mod hnf;
mod lattice;
mod lll;
mod matrix;
mod modular;
pub mod rational;

pub use bareiss::{int_determinant, int_inverse, rat_determinant, rat_inverse, solve_left};
pub use error::MathError;
pub use hnf::{check_hnf_properties, hnf, hnf_with_inverse, integer_hnf, HnfResult, HnfViolation};
pub use lattice::{integer_coordinates, triangular_coordinates};
pub use lll::{is_lll_reduced, lll_reduce, lll_reduce_with_stats, LllStats};
pub use matrix::{IntMatrix, RationalMatrix};
pub use modular::det_multimodular;
pub use rational::Rational;

pub type Result<T> = std::result::Result<T, MathError>;
