//! Complementary collapse: orthogonality fans, invisible and orthogonal
//! chains, orthogonality trees and the equivariant Morse matching that
//! collapses the visible chains onto a single vertex.
//!
//! Restrictions of a fan to an interval `[lo, hi]` are not materialized as
//! separate lattices. They are stacks of `∧ y` and `∨ y` steps evaluated on
//! global element indices, so every chain handed to a base function lives
//! in the original lattice.

mod fan;
mod matching;
mod orthogonal;

pub use fan::{attached_words, parabolic_fan, point_fan, symmetry_breaking_fan, young_fan, ChainFunction, Fan};
pub use matching::{
    build_matching, build_matching_unchecked, matching_partner, open_chains, Matching, MatchingChecks,
    MATCHING_CHAIN_BOUND,
};
pub use orthogonal::{
    effective_first_value, orthogonal_chains, OrthogonalChain, OrthogonalOrbit, OrthogonalSet, TreeNode, Witness,
    ORTHOGONAL_BOUND,
};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{betti_numbers, BettiTable, Field};
use crate::poset_core::{subspace::subspace_dimension, Chain, FiniteLattice};
use crate::simplicial::{nerve_model, orbit_chain_complex_with, ChainBasis, NerveEnds, DEFAULT_CHAIN_BOUND};

/// All nonempty chains of the whole lattice, `0̂` and `1̂` included.
pub fn all_chains(l: &FiniteLattice, bound: usize) -> Result<Vec<Chain>> {
    let inner = open_chains(l, l.bottom(), l.top(), bound)?;
    let mut out = Vec::with_capacity(4 * (inner.len() + 1));
    for core in std::iter::once(Vec::new()).chain(inner) {
        for with_bottom in [false, true] {
            for with_top in [false, true] {
                let mut c = Vec::with_capacity(core.len() + 2);
                if with_bottom {
                    c.push(l.bottom());
                }
                c.extend_from_slice(&core);
                if with_top {
                    c.push(l.top());
                }
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// A failure of the orthogonality-function axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FunctionDefect {
    /// Some element of the chain is not below the value.
    NotIncreasing { chain: Chain, value: usize },
    /// `F(g·σ) ≠ g·F(σ)` for a generator `g`.
    NotEquivariant { chain: Chain, generator: usize },
    /// Two comparable elements `t_1 < t_2` of the subposet
    /// `{y_m < t < z : t ∧ F(σ) = y_m, z ≤ t ∨ F(σ)}`.
    NotDiscrete {
        chain: Chain,
        z: usize,
        t1: usize,
        t2: usize,
    },
}

/// Checks that `F_{i+1}` is increasing, commutes with the generators of the
/// fan's group, and satisfies the discreteness condition, over every
/// nonempty chain of the lattice. Returns the first defect found.
pub fn verify_orthogonality_function(fan: &Fan, i: usize, bound: usize) -> Result<Option<FunctionDefect>> {
    if i >= fan.len() {
        return Err(Error::arg(format!("the fan has {} functions", fan.len())));
    }
    let l = fan.lattice;
    let tables = l.action_tables(&fan.group.generators)?;
    let mut checked: HashSet<(usize, usize)> = HashSet::new();
    for chain in all_chains(l, bound)? {
        let value = fan.value(i, &chain);
        if chain.iter().any(|&y| !l.leq(y, value)) {
            return Ok(Some(FunctionDefect::NotIncreasing { chain, value }));
        }
        for (g, table) in tables.iter().enumerate() {
            let image: Chain = chain.iter().map(|&y| table[y] as usize).collect();
            if fan.value(i, &image) != table[value] as usize {
                return Ok(Some(FunctionDefect::NotEquivariant { chain, generator: g }));
            }
        }
        let ym = *chain.last().unwrap();
        if !checked.insert((ym, value)) {
            continue;
        }
        if let Some((z, t1, t2)) = discreteness_defect(l, ym, value) {
            return Ok(Some(FunctionDefect::NotDiscrete { chain, z, t1, t2 }));
        }
    }
    Ok(None)
}

/// The condition depends on `σ` only through its top `y_m` and the value.
fn discreteness_defect(l: &FiniteLattice, ym: usize, value: usize) -> Option<(usize, usize, usize)> {
    let above: Vec<usize> = l.up_set(ym).ones().filter(|&t| t != ym).collect();
    let candidates: Vec<usize> = above.iter().copied().filter(|&t| l.meet(t, value) == ym).collect();
    for &z in &above {
        let set: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&t| l.lt(t, z) && l.leq(z, l.join(t, value)))
            .collect();
        for (a, &t1) in set.iter().enumerate() {
            for &t2 in &set[a + 1..] {
                if l.lt(t1, t2) {
                    return Some((z, t1, t2));
                }
                if l.lt(t2, t1) {
                    return Some((z, t2, t1));
                }
            }
        }
    }
    None
}

/// A failure of the orthogonality-fan axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FanDefect {
    /// Function `index` (counted from 0) is not increasing or not
    /// equivariant on the whole lattice.
    Function { index: usize, defect: FunctionDefect },
    /// In the restriction to `[lo, hi]`, the elements orthogonal to the
    /// first value `x` contain the comparable pair `t1 < t2`.
    NotDiscrete {
        lo: usize,
        hi: usize,
        x: usize,
        t1: usize,
        t2: usize,
    },
}

/// Checks the recursive fan axioms directly: every function is increasing
/// and equivariant, and in every restriction reached through an orthogonal
/// element the complements of the first value form an antichain.
///
/// Restrictions of increasing equivariant functions stay increasing and
/// equivariant for the stabilizer, so the first axiom is tested once on the
/// whole lattice.
pub fn verify_fan_axioms(fan: &Fan, bound: usize) -> Result<Option<FanDefect>> {
    let l = fan.lattice;
    let tables = l.action_tables(&fan.group.generators)?;
    let chains = all_chains(l, bound)?;
    for index in 0..fan.len() {
        for chain in &chains {
            let value = fan.value(index, chain);
            if chain.iter().any(|&y| !l.leq(y, value)) {
                let defect = FunctionDefect::NotIncreasing {
                    chain: chain.clone(),
                    value,
                };
                return Ok(Some(FanDefect::Function { index, defect }));
            }
            for (g, table) in tables.iter().enumerate() {
                let image: Chain = chain.iter().map(|&y| table[y] as usize).collect();
                if fan.value(index, &image) != table[value] as usize {
                    let defect = FunctionDefect::NotEquivariant {
                        chain: chain.clone(),
                        generator: g,
                    };
                    return Ok(Some(FanDefect::Function { index, defect }));
                }
            }
        }
    }
    Ok(fan_defect_in(fan, &fan.root_view()))
}

fn fan_defect_in(fan: &Fan, view: &fan::View) -> Option<FanDefect> {
    let first = view.funcs.first()?;
    let l = fan.lattice;
    let (lo, hi) = (view.lo, view.hi);
    let x = fan.eval(first, &[lo]);
    let perp: Vec<usize> = l
        .up_set(lo)
        .ones()
        .filter(|&y| l.leq(y, hi) && l.meet(y, x) == lo && l.join(y, x) == hi)
        .collect();
    for (a, &t1) in perp.iter().enumerate() {
        for &t2 in &perp[a + 1..] {
            let (t1, t2) = if l.lt(t2, t1) { (t2, t1) } else { (t1, t2) };
            if l.lt(t1, t2) {
                return Some(FanDefect::NotDiscrete { lo, hi, x, t1, t2 });
            }
        }
    }
    if x == hi {
        return None;
    }
    perp.into_iter()
        .find_map(|y| fan_defect_in(fan, &view.left(y)).or_else(|| fan_defect_in(fan, &view.right(y))))
}

/// Reduced Betti numbers of the open interval `(lo, hi)`. The empty
/// interval has the homology of the `(−1)`-sphere.
pub fn interval_betti(l: &FiniteLattice, lo: usize, hi: usize, field: Field) -> Result<BettiTable> {
    if !l.lt(lo, hi) {
        return Err(Error::arg("interval endpoints must satisfy lo < hi"));
    }
    let covers = l.up_set(lo).ones().all(|y| y == lo || y == hi || !l.leq(y, hi));
    if covers {
        return Ok(BettiTable::from_pairs(field, &[(-1, 1)]));
    }
    let sub = Arc::new(l.interval(lo, hi)?);
    let model = nerve_model(sub, NerveEnds::Open);
    let complex = orbit_chain_complex_with(&model, field, ChainBasis::FactorTensor, DEFAULT_CHAIN_BOUND)?;
    Ok(betti_numbers(&complex))
}

/// An isomorphism-type key for intervals, used to share homology
/// computations.
fn interval_key(l: &FiniteLattice, lo: usize, hi: usize) -> (u8, Vec<usize>) {
    if let (Some(a), Some(b)) = (l.partition(lo), l.partition(hi)) {
        let mut sizes: Vec<usize> = vec![0; b.num_blocks()];
        let mut seen = HashSet::new();
        for (s, &blk) in b.labels().iter().enumerate() {
            if seen.insert(a.labels()[s]) {
                sizes[blk as usize] += 1;
            }
        }
        sizes.retain(|&m| m > 1);
        sizes.sort_unstable();
        return (0, sizes);
    }
    if let (Some(a), Some(b)) = (subspace_dimension(l, lo), subspace_dimension(l, hi)) {
        return (1, vec![b - a]);
    }
    (2, vec![lo, hi])
}

/// Reduced Betti numbers of the proper part predicted by the wedge
/// decomposition over the orthogonal chains `[y_0 < … < y_r]`:
/// each summand is `|(0̂,y_0)|^◇ ∧ Σ|(y_0,y_1)|^◇ ∧ … ∧ Σ|(y_{r−1},y_r)|^◇ ∧ |(y_r,1̂)|^◇`,
/// whose reduced Poincaré series over a field is `t^r · Π_I t·P_I(t)`.
pub fn wedge_betti(fan: &Fan, set: &OrthogonalSet, field: Field) -> Result<BettiTable> {
    let l = fan.lattice;
    let mut cache: HashMap<(u8, Vec<usize>), BettiTable> = HashMap::new();
    let mut total: BTreeMap<i64, u64> = BTreeMap::new();
    for oc in &set.chains {
        let r = oc.chain.len() as i64 - 1;
        let mut series: BTreeMap<i64, u64> = BTreeMap::from([(r, 1)]);
        for &(a, b) in &oc.intervals {
            let key = interval_key(l, a, b);
            let betti = match cache.get(&key) {
                Some(t) => t.clone(),
                None => {
                    let t = interval_betti(l, a, b, field)?;
                    cache.insert(key, t.clone());
                    t
                }
            };
            let mut next = BTreeMap::new();
            for (&d1, &r1) in &series {
                for (&d2, &r2) in &betti.betti {
                    *next.entry(d1 + d2 + 1).or_insert(0) += r1 * r2;
                }
            }
            series = next;
        }
        for (d, r) in series {
            *total.entry(d).or_insert(0) += r;
        }
    }
    let mut t = BettiTable::new(field);
    for (d, r) in total {
        t.add(d, r);
    }
    Ok(t)
}

/// The JSON report of the `collapse` command.
#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub fan: String,
    pub visible_count: usize,
    pub orthogonal_count: usize,
    pub matching: MatchingSummary,
    pub checks: MatchingChecks,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingSummary {
    pub pairs: usize,
    pub fixed: Vec<String>,
}

pub fn collapse_report(fan: &Fan) -> Result<CollapseReport> {
    let (m, _) = build_matching_unchecked(fan)?;
    let l = fan.lattice;
    Ok(CollapseReport {
        fan: m.fan.clone(),
        visible_count: m.visible_count,
        orthogonal_count: m.orthogonal_count,
        matching: MatchingSummary {
            pairs: m.pairs.len(),
            fixed: m
                .fixed
                .iter()
                .map(|c| c.iter().map(|&y| l.label(y)).collect::<Vec<_>>().join(" < "))
                .collect(),
        },
        checks: m.checks,
    })
}
