use std::collections::HashMap;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use super::{Partition, Permutation};
use crate::error::{Error, Result};

/// Largest lattice whose order relation is materialized as bit sets.
pub const MATERIALIZE_BOUND: usize = 25_000;

/// Lattices up to this size get precomputed meet/join tables when their
/// elements carry no structure of their own.
const TABLE_BOUND: usize = 2048;

/// What the elements of a lattice are.
#[derive(Clone, Debug)]
pub enum Elements {
    Partitions(Vec<Partition>),
    /// Subspaces of `F_q^dim`, each stored as the set of its member vectors
    /// (vectors encoded base `q`).
    Subspaces {
        q: u64,
        dim: usize,
        members: Vec<FixedBitSet>,
    },
    Abstract,
}

/// A finite lattice with its order stored as up-set and down-set bit rows.
///
/// Element indices run over a linear extension of the order, so `a ≤ b`
/// implies `a <= b` as integers; index 0 is the bottom.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    elements: Elements,
    partition_index: HashMap<Partition, u32>,
    subspace_index: HashMap<FixedBitSet, u32>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    height: Vec<u32>,
    bottom: usize,
    top: usize,
    tables: OnceLock<(Vec<u32>, Vec<u32>)>,
}

impl FiniteLattice {
    /// Builds a lattice from an order predicate. Elements are re-indexed
    /// along a linear extension; `elements` must be listed in the caller's
    /// order and are permuted accordingly.
    pub fn from_order<F>(size: usize, leq: F, elements: Elements) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        if size == 0 {
            return Err(Error::arg("a lattice needs at least one element"));
        }
        if size > MATERIALIZE_BOUND {
            return Err(Error::resource(
                "lattice materialization",
                size as u128,
                MATERIALIZE_BOUND as u128,
            ));
        }
        let mut raw_down = vec![FixedBitSet::with_capacity(size); size];
        for (b, row) in raw_down.iter_mut().enumerate() {
            for a in 0..size {
                if leq(a, b) {
                    row.insert(a);
                }
            }
        }
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by_key(|&i| (raw_down[i].count_ones(..), i));
        let mut new_of_old = vec![0usize; size];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        for old_b in 0..size {
            let b = new_of_old[old_b];
            for old_a in raw_down[old_b].ones() {
                let a = new_of_old[old_a];
                down[b].insert(a);
                up[a].insert(b);
            }
        }
        let elements = match elements {
            Elements::Partitions(v) => Elements::Partitions(order.iter().map(|&o| v[o].clone()).collect()),
            Elements::Subspaces { q, dim, members } => Elements::Subspaces {
                q,
                dim,
                members: order.iter().map(|&o| members[o].clone()).collect(),
            },
            Elements::Abstract => Elements::Abstract,
        };
        Self::assemble(elements, up, down)
    }

    fn assemble(elements: Elements, up: Vec<FixedBitSet>, down: Vec<FixedBitSet>) -> Result<Self> {
        let size = up.len();
        let bottom = (0..size)
            .find(|&x| up[x].count_ones(..) == size)
            .ok_or_else(|| Error::arg("poset has no least element"))?;
        let top = (0..size)
            .find(|&x| down[x].count_ones(..) == size)
            .ok_or_else(|| Error::arg("poset has no greatest element"))?;
        let mut height = vec![0u32; size];
        for y in 0..size {
            let h = down[y]
                .ones()
                .filter(|&x| x != y)
                .map(|x| height[x] + 1)
                .max()
                .unwrap_or(0);
            height[y] = h;
        }
        let partition_index = match &elements {
            Elements::Partitions(v) => v.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect(),
            _ => HashMap::new(),
        };
        let subspace_index = match &elements {
            Elements::Subspaces { members, .. } => {
                members.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect()
            }
            _ => HashMap::new(),
        };
        Ok(FiniteLattice {
            elements,
            partition_index,
            subspace_index,
            up,
            down,
            height,
            bottom,
            top,
            tables: OnceLock::new(),
        })
    }

    /// The partition lattice 𝒫_n.
    pub fn partition_lattice(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("partition lattice needs n >= 1"));
        }
        let bell = bell_number(n);
        if bell > MATERIALIZE_BOUND as u128 {
            return Err(Error::resource(
                format!("partition lattice of {n} points"),
                bell,
                MATERIALIZE_BOUND as u128,
            ));
        }
        Self::from_partitions(Partition::all(n))
    }

    /// The sub-poset of the partition lattice on the given partitions, which
    /// must all have the same size and include 0̂ and 1̂. Closure under meets
    /// and joins is the caller's responsibility (see [`Self::check_axioms`]).
    pub fn from_partitions(mut parts: Vec<Partition>) -> Result<Self> {
        let n = parts
            .first()
            .map(Partition::n)
            .ok_or_else(|| Error::arg("no partitions given"))?;
        if parts.iter().any(|p| p.n() != n) {
            return Err(Error::arg("partitions of different sizes"));
        }
        if parts.len() > MATERIALIZE_BOUND {
            return Err(Error::resource(
                "lattice materialization",
                parts.len() as u128,
                MATERIALIZE_BOUND as u128,
            ));
        }
        parts.sort_by(|a, b| (n - a.num_blocks(), a).cmp(&(n - b.num_blocks(), b)));
        parts.dedup();
        let size = parts.len();
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        for a in 0..size {
            for b in a..size {
                if parts[a].refines(&parts[b]) {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        Self::assemble(Elements::Partitions(parts), up, down)
    }

    /// Restriction to a subset of elements, keeping the element payload.
    pub fn sublattice(&self, elems: &[usize]) -> Result<Self> {
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let size = elems.len();
        if size == 0 {
            return Err(Error::arg("empty sublattice"));
        }
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate().skip(i) {
                if self.leq(a, b) {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        let elements = match &self.elements {
            Elements::Partitions(v) => Elements::Partitions(elems.iter().map(|&i| v[i].clone()).collect()),
            Elements::Subspaces { q, dim, members } => Elements::Subspaces {
                q: *q,
                dim: *dim,
                members: elems.iter().map(|&i| members[i].clone()).collect(),
            },
            Elements::Abstract => Elements::Abstract,
        };
        Self::assemble(elements, up, down)
    }

    /// The closed interval `[a, b]` with bottom `a` and top `b`.
    pub fn interval(&self, a: usize, b: usize) -> Result<Self> {
        if a >= self.len() || b >= self.len() {
            return Err(Error::arg("interval endpoint out of range"));
        }
        if !self.leq(a, b) {
            return Err(Error::arg(format!("{} is not below {}", self.label(a), self.label(b))));
        }
        self.sublattice(&self.interval_elements(a, b))
    }

    /// Indices of `{z : a ≤ z ≤ b}` in increasing order.
    pub fn interval_elements(&self, a: usize, b: usize) -> Vec<usize> {
        let mut s = self.up[a].clone();
        s.intersect_with(&self.down[b]);
        s.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.up[a].contains(b)
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn height(&self, x: usize) -> usize {
        self.height[x] as usize
    }

    /// Length of the longest chain in the lattice.
    pub fn rank(&self) -> usize {
        self.height[self.top] as usize
    }

    pub fn elements(&self) -> &Elements {
        &self.elements
    }

    pub fn partition(&self, x: usize) -> Option<&Partition> {
        match &self.elements {
            Elements::Partitions(v) => v.get(x),
            _ => None,
        }
    }

    pub fn partitions(&self) -> Option<&[Partition]> {
        match &self.elements {
            Elements::Partitions(v) => Some(v),
            _ => None,
        }
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.partition_index.get(p).map(|&i| i as usize)
    }

    pub fn index_of_subspace(&self, s: &FixedBitSet) -> Option<usize> {
        self.subspace_index.get(s).map(|&i| i as usize)
    }

    /// Human-readable element name (1-based for partitions).
    pub fn label(&self, x: usize) -> String {
        match &self.elements {
            Elements::Partitions(v) => v[x].to_string(),
            Elements::Subspaces { members, .. } => {
                let m: Vec<String> = members[x].ones().map(|v| v.to_string()).collect();
                format!("<{}>", m.join(","))
            }
            Elements::Abstract => x.to_string(),
        }
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        if self.leq(a, b) {
            return a;
        }
        if self.leq(b, a) {
            return b;
        }
        match &self.elements {
            Elements::Partitions(v) => {
                if let Some(i) = self.index_of(&v[a].meet(&v[b])) {
                    return i;
                }
            }
            _ if self.len() <= TABLE_BOUND => {
                let t = self.tables();
                return t.0[a * self.len() + b] as usize;
            }
            _ => {}
        }
        self.meet_by_bits(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        if self.leq(a, b) {
            return b;
        }
        if self.leq(b, a) {
            return a;
        }
        match &self.elements {
            Elements::Partitions(v) => {
                if let Some(i) = self.index_of(&v[a].join(&v[b])) {
                    return i;
                }
            }
            _ if self.len() <= TABLE_BOUND => {
                let t = self.tables();
                return t.1[a * self.len() + b] as usize;
            }
            _ => {}
        }
        self.join_by_bits(a, b)
    }

    /// The greatest common lower bound is the common lower bound of
    /// greatest height, since it lies strictly above every other one.
    fn meet_by_bits(&self, a: usize, b: usize) -> usize {
        let mut s = self.down[a].clone();
        s.intersect_with(&self.down[b]);
        s.ones().max_by_key(|&x| self.height[x]).unwrap_or(self.bottom)
    }

    fn join_by_bits(&self, a: usize, b: usize) -> usize {
        let mut s = self.up[a].clone();
        s.intersect_with(&self.up[b]);
        s.ones().min_by_key(|&x| self.height[x]).unwrap_or(self.top)
    }

    fn tables(&self) -> &(Vec<u32>, Vec<u32>) {
        self.tables.get_or_init(|| {
            let n = self.len();
            let mut m = vec![0u32; n * n];
            let mut j = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    m[a * n + b] = self.meet_by_bits(a, b) as u32;
                    j[a * n + b] = self.join_by_bits(a, b) as u32;
                }
            }
            (m, j)
        })
    }

    /// `{y ≠ 0̂, 1̂ : x ∧ y = 0̂ and x ∨ y = 1̂}`.
    pub fn complement_set(&self, x: usize) -> Vec<usize> {
        if x == self.bottom || x == self.top {
            return Vec::new();
        }
        (0..self.len())
            .filter(|&y| y != self.bottom && y != self.top)
            .filter(|&y| self.meet(x, y) == self.bottom && self.join(x, y) == self.top)
            .collect()
    }

    /// Whether `x` and `y` are complements of each other.
    pub fn perp(&self, x: usize, y: usize) -> bool {
        self.meet(x, y) == self.bottom && self.join(x, y) == self.top
    }

    pub fn is_chain(&self, elems: &[usize]) -> bool {
        elems.windows(2).all(|w| self.lt(w[0], w[1]))
    }

    /// Index of `g·x` when the lattice elements carry a natural action.
    pub fn act_element(&self, g: &Permutation, x: usize) -> Option<usize> {
        match &self.elements {
            Elements::Partitions(v) => {
                if g.degree() != v[x].n() {
                    return None;
                }
                self.index_of(&v[x].act(g))
            }
            Elements::Subspaces { members, .. } => {
                let s = &members[x];
                if g.degree() != s.len() {
                    return None;
                }
                let mut image = FixedBitSet::with_capacity(s.len());
                for v in s.ones() {
                    image.insert(g.apply(v));
                }
                self.index_of_subspace(&image)
            }
            Elements::Abstract => None,
        }
    }

    /// Permutation tables `t[g][x] = g·x` for every listed group element.
    pub fn action_tables(&self, group: &[Permutation]) -> Result<Vec<Vec<u32>>> {
        group
            .iter()
            .map(|g| {
                (0..self.len())
                    .map(|x| {
                        self.act_element(g, x).map(|y| y as u32).ok_or_else(|| {
                            Error::invariant(format!("action of {g} not closed on element {}", self.label(x)))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Exhaustively checks that the order is a lattice order and that the
    /// meet and join operations return greatest lower and least upper
    /// bounds. Returns a description of the first failure.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let n = self.len();
        for a in 0..n {
            if !self.leq(a, a) {
                return Err(format!("not reflexive at {}", self.label(a)));
            }
            for b in 0..n {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(format!("not antisymmetric at {}, {}", self.label(a), self.label(b)));
                }
                let m = self.meet(a, b);
                let j = self.join(a, b);
                if !(self.leq(m, a) && self.leq(m, b) && self.leq(a, j) && self.leq(b, j)) {
                    return Err(format!("bounds fail at {}, {}", self.label(a), self.label(b)));
                }
                for c in 0..n {
                    if self.leq(a, b) && self.leq(b, c) && !self.leq(a, c) {
                        return Err("not transitive".into());
                    }
                    if self.leq(c, a) && self.leq(c, b) && !self.leq(c, m) {
                        return Err(format!("meet of {}, {} not greatest", self.label(a), self.label(b)));
                    }
                    if self.leq(a, c) && self.leq(b, c) && !self.leq(j, c) {
                        return Err(format!("join of {}, {} not least", self.label(a), self.label(b)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Bell numbers count set partitions.
pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(l: &FiniteLattice, s: &str) -> usize {
        let n = l.partition(0).unwrap().n();
        l.index_of(&Partition::parse(n, s).unwrap()).unwrap()
    }

    #[test]
    fn bell() {
        assert_eq!(bell_number(0), 1);
        assert_eq!(bell_number(4), 15);
        assert_eq!(bell_number(9), 21147);
    }

    #[test]
    fn partition_lattice_axioms() {
        for n in 1..=4 {
            let l = FiniteLattice::partition_lattice(n).unwrap();
            l.check_axioms().unwrap();
            assert_eq!(l.rank(), n - 1);
            assert_eq!(l.bottom(), 0);
            assert_eq!(l.top(), l.len() - 1);
        }
    }

    #[test]
    fn complement_examples() {
        let l4 = FiniteLattice::partition_lattice(4).unwrap();
        let c: Vec<String> = l4
            .complement_set(idx(&l4, "12|34"))
            .iter()
            .map(|&y| l4.label(y))
            .collect();
        let mut expected = vec!["13|24", "14|23", "13|2|4", "14|2|3", "1|23|4", "1|24|3"];
        expected.sort();
        let mut got = c.clone();
        got.sort();
        assert_eq!(got, expected);
        let l3 = FiniteLattice::partition_lattice(3).unwrap();
        let c3: Vec<String> = l3
            .complement_set(idx(&l3, "12|3"))
            .iter()
            .map(|&y| l3.label(y))
            .collect();
        assert_eq!(c3.len(), 2);
        assert!(l3.complement_set(l3.bottom()).is_empty());
        assert!(l3.complement_set(l3.top()).is_empty());
    }

    #[test]
    fn intervals() {
        let l4 = FiniteLattice::partition_lattice(4).unwrap();
        let square = l4.interval(l4.bottom(), idx(&l4, "12|34")).unwrap();
        assert_eq!(square.len(), 4);
        assert_eq!(square.rank(), 2);
        let upper = l4.interval(idx(&l4, "12|3|4"), l4.top()).unwrap();
        assert_eq!(upper.len(), 5);
        assert_eq!(upper.rank(), 2);
        upper.check_axioms().unwrap();
        let x = idx(&l4, "13|24");
        assert_eq!(l4.interval(x, x).unwrap().len(), 1);
        assert!(matches!(l4.interval(l4.top(), l4.bottom()), Err(Error::Argument(_))));
    }

    #[test]
    fn abstract_lattice_from_order() {
        let divisors = [1usize, 2, 3, 4, 6, 12];
        let l =
            FiniteLattice::from_order(6, |a, b| divisors[b].is_multiple_of(divisors[a]), Elements::Abstract).unwrap();
        l.check_axioms().unwrap();
        assert_eq!(l.rank(), 3);
    }

    #[test]
    fn oversized_partition_lattice_is_resource_error() {
        assert!(matches!(
            FiniteLattice::partition_lattice(12),
            Err(Error::Resource { .. })
        ));
    }
}
