//! Exact linear algebra over the rationals and prime fields, and Betti
//! numbers of chain complexes.

mod field;
mod rank;

pub use field::{BettiTable, DegreeRanks, Field};
pub use rank::{matrix_rank, SparseMatrix};

use rayon::prelude::*;

use crate::simplicial::ChainComplex;

/// Reduced Betti numbers of a chain complex over its field.
///
/// `b_m = dim C_m − rank ∂_m − rank ∂_{m+1}`, reported in the complex's
/// external degree convention.
pub fn betti_numbers(c: &ChainComplex) -> BettiTable {
    betti_numbers_over(c, c.field)
}

/// Same as [`betti_numbers`] but over an explicitly chosen field; the
/// boundary matrices are integral, so one complex serves every field.
pub fn betti_numbers_over(c: &ChainComplex, field: Field) -> BettiTable {
    let top = c.bases.len();
    let ranks: Vec<usize> = (0..=top)
        .into_par_iter()
        .map(|m| c.boundary(m).map_or(0, |d| matrix_rank(d, field)))
        .collect();
    let mut table = BettiTable::new(field);
    for m in 0..top {
        let dim = c.bases[m].len();
        let b = dim - ranks[m] - ranks[m + 1];
        table.add(m as i64 + c.degree_shift, b as u64);
    }
    table.fingerprint = Some(c.fingerprint.clone());
    table.truncated_from = c.truncated_from.map(|m| m as i64 + c.degree_shift);
    if let Some(t) = table.truncated_from {
        table.betti.retain(|&d, _| d < t);
    }
    table
}
