//! Additive unit representations in rings of integers.
//!
//! This crate bundles the effective side of the "sums of units" circle of
//! problems: decision procedures for the unit sum number of quadratic and
//! purely cubic fields, searches for representations as sums of (distinct)
//! units in quadratic orders, Monte Carlo and exact evaluation of the lattice
//! point counting constants `c_{n,s}`, diagonalization and sum-of-two-units
//! decompositions of matrices over rings with two-sided Euclidean division
//! (rational integers, polynomials over a prime field, Hurwitz quaternions),
//! and empirical verification of the asymptotic counting theorem.
//!
//! All ring arithmetic is exact; floating point appears only in Monte Carlo
//! sampling and in certified fixed-point evaluations with tracked error
//! bounds (see [`precision`]).

pub mod counting;
pub mod criteria;
pub mod error;
pub mod hurwitz;
pub mod matrix_units;
pub mod polytope;
pub mod precision;
pub mod quadratic;
pub mod ring;
pub mod rng;
pub mod unit_sums;

pub use error::{Error, Result};
