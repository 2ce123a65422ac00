//! Equivariant combinatorics and exact homology of partition complexes.
//!
//! The crate builds the partition lattice and its relatives, enumerates
//! orbit chain complexes of their nerves and of sphere smash products,
//! computes Betti numbers over the rationals and prime fields, runs the
//! complementary-collapse Morse matching, and evaluates closed-form
//! homology predictions for comparison.

pub mod cli;
pub mod collapse;
pub mod error;
pub mod fixed_points;
pub mod homology;
pub mod lyndon;
pub mod poset_core;
pub mod predictions;
pub mod simplicial;

pub use error::{Error, Result};
