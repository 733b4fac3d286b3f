//! Deterministic color-coding toolkit.
//!
//! Decides k-Internal Out-Branching, k-Colorful Out-Branching and planar
//! k-Colorful Perfect Matching by evaluating Kirchhoff minors and Pfaffians
//! of Kasteleyn matrices under color-class substitution, extracting
//! colorful monomials with inclusion–exclusion, and enumerating perfect hash
//! families and splitters with polynomial delay.
//!
//! The pieces, bottom-up:
//! - [`graph`]: digraphs, out-branchings, maximum matching and the leaf
//!   exchange procedure.
//! - [`algebra`]: exact Bareiss determinants and signed Pfaffians.
//! - [`kirchhoff`] and [`planar`]: black-box polynomial evaluators.
//! - [`sieve`]: monomial sieving over any [`sieve::SievedEvaluator`].
//! - [`splitters`]: indexed splitters and perfect hash families.
//! - [`solvers`]: the three decision procedures plus witness recovery.
//! - [`oracle`]: brute-force ground truth.

pub mod algebra;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod kirchhoff;
pub mod oracle;
pub mod partition;
pub mod planar;
pub mod sieve;
pub mod solvers;
pub mod splitters;

pub use error::{Error, Result};
