use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Permutation;
use crate::error::{Error, Result};

/// A set partition of `{0..n-1}`.
///
/// Stored as a restricted growth string: `labels[i]` is the index of the
/// block containing `i`, and blocks are numbered in order of their minimum
/// element. This is a canonical form, so derived equality, hashing and
/// ordering are structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u8>,
}

impl Partition {
    /// The discrete partition 0̂ into singletons.
    pub fn discrete(n: usize) -> Self {
        assert!(n <= 255, "partitions are limited to 255 points");
        Partition {
            labels: (0..n as u8).collect(),
        }
    }

    /// The indiscrete partition 1̂ with a single block.
    pub fn indiscrete(n: usize) -> Self {
        Partition { labels: vec![0; n] }
    }

    /// Builds a partition from arbitrary block labels; any labelling that
    /// groups the same points gives the same partition.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(raw: &[T]) -> Self {
        assert!(raw.len() <= 255, "partitions are limited to 255 points");
        let mut seen: Vec<T> = Vec::new();
        let labels = raw
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(i) => i as u8,
                None => {
                    seen.push(*l);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        Partition { labels }
    }

    /// Builds a partition of `{0..n-1}` from zero-based blocks. The blocks
    /// must be disjoint, nonempty and cover every point.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n > 255 {
            return Err(Error::arg("partitions are limited to 255 points"));
        }
        let mut raw = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::arg("empty block in partition"));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::arg(format!("point {} out of range 1..{}", i + 1, n)));
                }
                if raw[i] != usize::MAX {
                    return Err(Error::arg(format!("point {} appears in two blocks", i + 1)));
                }
                raw[i] = b;
            }
        }
        if let Some(i) = raw.iter().position(|&b| b == usize::MAX) {
            return Err(Error::arg(format!("point {} is not covered", i + 1)));
        }
        Ok(Self::from_labels(&raw))
    }

    /// Parses the compact 1-based notation `"12|34"` or `"1,2|3,4"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in text.trim().split('|') {
            let part = part.trim();
            let items: Vec<&str> = if part.contains(',') || part.contains(' ') {
                part.split([',', ' ']).filter(|s| !s.is_empty()).collect()
            } else {
                part.as_bytes()
                    .iter()
                    .map(|b| std::str::from_utf8(std::slice::from_ref(b)).unwrap())
                    .collect()
            };
            let mut block = Vec::new();
            for it in items {
                let v: usize = it
                    .parse()
                    .map_err(|_| Error::arg(format!("bad point '{it}' in partition '{text}'")))?;
                if v == 0 {
                    return Err(Error::arg("points are numbered from 1"));
                }
                block.push(v - 1);
            }
            blocks.push(block);
        }
        Self::from_blocks(n, &blocks)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Block index of each point, in canonical numbering.
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// Blocks sorted by minimum, each sorted ascending (zero-based).
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(i);
        }
        blocks
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.n()
    }

    pub fn is_indiscrete(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    /// Refinement order: `self ≤ other` when every block of `self` lies in a
    /// block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.n(), other.n());
        let mut image = [u8::MAX; 256];
        for (a, b) in self.labels.iter().zip(&other.labels) {
            let slot = &mut image[*a as usize];
            if *slot == u8::MAX {
                *slot = *b;
            } else if *slot != *b {
                return false;
            }
        }
        true
    }

    /// Common refinement. Both partitions must have the same size.
    pub fn meet(&self, other: &Partition) -> Partition {
        debug_assert_eq!(self.n(), other.n());
        let n = self.n();
        let mut next = 0u8;
        let labels = if n <= 16 {
            let mut map = [u8::MAX; 256];
            self.labels
                .iter()
                .zip(&other.labels)
                .map(|(&a, &b)| {
                    let slot = &mut map[(a as usize) << 4 | b as usize];
                    if *slot == u8::MAX {
                        *slot = next;
                        next += 1;
                    }
                    *slot
                })
                .collect()
        } else {
            let mut map = std::collections::HashMap::with_capacity(n);
            self.labels
                .iter()
                .zip(&other.labels)
                .map(|p| {
                    *map.entry(p).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        Partition { labels }
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Partition {
        debug_assert_eq!(self.n(), other.n());
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut first_a = [usize::MAX; 256];
        let mut first_b = [usize::MAX; 256];
        for i in 0..n {
            for (labels, first) in [(&self.labels, &mut first_a), (&other.labels, &mut first_b)] {
                let l = labels[i] as usize;
                if first[l] == usize::MAX {
                    first[l] = i;
                } else {
                    let (ra, rb) = (find(&mut parent, first[l]), find(&mut parent, i));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        Partition::from_labels(&roots)
    }

    /// The image `g·p`, whose blocks are `g(B)` for the blocks `B` of `p`.
    pub fn act(&self, g: &Permutation) -> Partition {
        debug_assert_eq!(g.degree(), self.n());
        let mut raw = vec![0u8; self.n()];
        for (i, &l) in self.labels.iter().enumerate() {
            raw[g.apply(i)] = l;
        }
        Partition::from_labels(&raw)
    }

    /// Merges the listed blocks (by canonical block index) into one block.
    pub fn merge_blocks(&self, which: &[usize]) -> Partition {
        let Some(&target) = which.iter().min() else {
            return self.clone();
        };
        let raw: Vec<u8> = self
            .labels
            .iter()
            .map(|&l| if which.contains(&(l as usize)) { target as u8 } else { l })
            .collect();
        Partition::from_labels(&raw)
    }

    /// Sizes of the blocks, sorted in decreasing order.
    pub fn block_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.blocks().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// All partitions of `{0..n-1}` in lexicographic order of their
    /// restricted growth strings.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        if n == 0 {
            out.push(Partition { labels: vec![] });
            return out;
        }
        let mut labels = vec![0u8; n];
        fn rec(pos: usize, max: u8, labels: &mut Vec<u8>, out: &mut Vec<Partition>) {
            if pos == labels.len() {
                out.push(Partition { labels: labels.clone() });
                return;
            }
            for l in 0..=max + 1 {
                labels[pos] = l;
                rec(pos + 1, max.max(l), labels, out);
            }
        }
        rec(1, 0, &mut labels, &mut out);
        out
    }

    /// JSON-friendly 1-based block list.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|i| i + 1).collect())
            .collect()
    }
}

/// Size-checked common refinement.
pub fn partition_meet(p: &Partition, q: &Partition) -> Result<Partition> {
    if p.n() != q.n() {
        return Err(Error::arg(format!("size mismatch: {} vs {}", p.n(), q.n())));
    }
    Ok(p.meet(q))
}

/// Size-checked finest common coarsening.
pub fn partition_join(p: &Partition, q: &Partition) -> Result<Partition> {
    if p.n() != q.n() {
        return Err(Error::arg(format!("size mismatch: {} vs {}", p.n(), q.n())));
    }
    Ok(p.join(q))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() >= 10 { "," } else { "" };
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(sep))
            .collect();
        write!(f, "{}", blocks.join("|"))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks: Vec<Vec<usize>> = Vec::deserialize(d)?;
        let n = blocks.iter().map(Vec::len).sum();
        let zero: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| b.iter().map(|&i| i.wrapping_sub(1)).collect())
            .collect();
        Partition::from_blocks(n, &zero).map_err(serde::de::Error::custom)
    }
}
