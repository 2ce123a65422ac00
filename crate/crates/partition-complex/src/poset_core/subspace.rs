//! Subspace lattices of `F_q^n` for prime `q`.
//!
//! Vectors are encoded as integers in base `q`, coordinate `i` being the
//! digit of weight `q^i`. A subspace is stored as the bit set of its member
//! vectors.

use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use super::lattice::{Elements, FiniteLattice, MATERIALIZE_BOUND};
use super::Permutation;
use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic on `F_q^n` with vectors encoded as base-`q` integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectorSpace {
    pub q: u64,
    pub dim: usize,
}

impl VectorSpace {
    pub fn new(q: u64, dim: usize) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::arg(format!(
                "q = {q} is not prime (only prime fields are supported)"
            )));
        }
        if dim == 0 {
            return Err(Error::arg("dimension must be at least 1"));
        }
        let size = (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if size > 1 << 20 {
            return Err(Error::resource("vector count", size, 1 << 20));
        }
        Ok(VectorSpace { q, dim })
    }

    pub fn size(&self) -> usize {
        (self.q as usize).pow(self.dim as u32)
    }

    pub fn decode(&self, v: usize) -> Vec<u64> {
        let mut v = v as u64;
        (0..self.dim)
            .map(|_| {
                let d = v % self.q;
                v /= self.q;
                d
            })
            .collect()
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        coords.iter().rev().fold(0u64, |acc, &c| acc * self.q + c % self.q) as usize
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.q).collect();
        self.encode(&s)
    }

    pub fn scale(&self, c: u64, a: usize) -> usize {
        let x: Vec<u64> = self.decode(a).iter().map(|u| u * c % self.q).collect();
        self.encode(&x)
    }

    /// The span of a set of vectors, as a member bit set.
    pub fn span(&self, gens: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.size());
        s.insert(0);
        for g in gens {
            if s.contains(g) {
                continue;
            }
            let current: Vec<usize> = s.ones().collect();
            for c in 1..self.q {
                let cg = self.scale(c, g);
                for &m in &current {
                    s.insert(self.add(m, cg));
                }
            }
        }
        s
    }

    /// The permutation of vectors induced by a matrix (row-major,
    /// `matrix[i][j]` is the coefficient of coordinate `j` in output `i`).
    pub fn linear_permutation(&self, matrix: &[Vec<u64>]) -> Result<Permutation> {
        let image: Vec<usize> = (0..self.size())
            .map(|v| {
                let x = self.decode(v);
                let y: Vec<u64> = matrix
                    .iter()
                    .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<u64>() % self.q)
                    .collect();
                self.encode(&y)
            })
            .collect();
        Permutation::from_images(image).map_err(|_| Error::arg("matrix is not invertible"))
    }

    /// All invertible matrices, as permutations of the vectors.
    pub fn general_linear_group(&self) -> Result<Vec<Permutation>> {
        let entries = self.dim * self.dim;
        let total = (self.q as u128).checked_pow(entries as u32).unwrap_or(u128::MAX);
        if total > 1_000_000 {
            return Err(Error::resource("matrix enumeration", total, 1_000_000));
        }
        let mut out = Vec::new();
        for code in 0..total as usize {
            let mut c = code;
            let matrix: Vec<Vec<u64>> = (0..self.dim)
                .map(|_| {
                    (0..self.dim)
                        .map(|_| {
                            let d = (c as u64) % self.q;
                            c /= self.q as usize;
                            d
                        })
                        .collect()
                })
                .collect();
            if let Ok(p) = self.linear_permutation(&matrix) {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n` (Gaussian binomial).
pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// The lattice of all subspaces of `F_q^n`, ordered by inclusion.
pub fn subspace_lattice(q: u64, n: usize) -> Result<FiniteLattice> {
    let space = VectorSpace::new(q, n)?;
    let count: u128 = (0..=n).map(|k| gaussian_binomial(q, n, k)).sum();
    if count > MATERIALIZE_BOUND as u128 {
        return Err(Error::resource(
            format!("subspace lattice of F_{q}^{n}"),
            count,
            MATERIALIZE_BOUND as u128,
        ));
    }
    let zero = space.span(std::iter::empty());
    let mut seen: HashSet<FixedBitSet> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(s) = queue.pop_front() {
        for v in 0..space.size() {
            if s.contains(v) {
                continue;
            }
            let t = space.span(s.ones().chain(std::iter::once(v)));
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    let mut members: Vec<FixedBitSet> = seen.into_iter().collect();
    members.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
    let size = members.len();
    let leq = |a: usize, b: usize| members[a].is_subset(&members[b]);
    let lattice = FiniteLattice::from_order(
        size,
        leq,
        Elements::Subspaces {
            q,
            dim: n,
            members: members.clone(),
        },
    )?;
    Ok(lattice)
}

/// Dimension of a subspace element of a subspace lattice.
pub fn subspace_dimension(l: &FiniteLattice, x: usize) -> Option<usize> {
    match l.elements() {
        Elements::Subspaces { q, members, .. } => {
            let size = members[x].count_ones(..) as u64;
            let mut d = 0;
            let mut s = 1u64;
            while s < size {
                s *= q;
                d += 1;
            }
            Some(d)
        }
        _ => None,
    }
}
