//! Permutations, Schubert and Grothendieck polynomials, and climbing chains.

pub mod audit;
pub mod chains;
pub mod permutation;
pub mod polynomial;
pub mod statistics;
pub mod verify;

pub use chains::{ChainError, ClimbingChain, EnumerationGuard, MarkedChain};
pub use permutation::{Cell, Link, Permutation, PermutationError};
pub use polynomial::{IntPolynomial, PolynomialError, PolynomialKind, PolynomialTable, TermOrder};
pub use statistics::{ExponentVector, StatisticsError};
