//! Partitions, permutations, finite lattices and group actions on them.

pub mod group;
pub mod lattice;
pub mod partition;
pub mod permutation;
pub mod subspace;

pub use group::{orbits, GroupAction, Orbit};
pub use lattice::{bell_number, Elements, FiniteLattice, MATERIALIZE_BOUND};
pub use partition::{partition_join, partition_meet, Partition};
pub use permutation::Permutation;
pub use subspace::{subspace_lattice, VectorSpace};

/// A strictly increasing list of lattice element indices.
pub type Chain = Vec<usize>;

/// `{y ∈ L − {0̂, 1̂} : x ∧ y = 0̂, x ∨ y = 1̂}`.
pub fn complement_set(l: &FiniteLattice, x: usize) -> Vec<usize> {
    l.complement_set(x)
}

/// The closed interval `[a, b]` as a lattice in its own right.
pub fn interval(l: &FiniteLattice, a: usize, b: usize) -> crate::Result<FiniteLattice> {
    l.interval(a, b)
}
