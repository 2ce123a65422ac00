use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{CollapsedNerveModel, LinearRole};

use crate::error::{Error, Result};
use crate::homology::{Field, SparseMatrix};

/// Default bound on the number of enumerated orbit chains.
pub const DEFAULT_CHAIN_BOUND: usize = 10_000_000;

/// Bound on product-poset size times group order for action tables.
const TABLE_BOUND: usize = 80_000_000;

/// The chains of one simplicial degree, stored back to back.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basis {
    /// Number of poset elements per chain (degree + 1).
    pub width: usize,
    pub data: Vec<u32>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.width).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.width.max(1))
    }
}

/// Normalized chains of a strict quotient, with integral boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub field: Field,
    /// Reported degree = internal degree + shift.
    pub degree_shift: i64,
    /// `bases[m]` holds orbit representatives of internal degree `m`.
    pub bases: Vec<Basis>,
    /// `boundaries[m]` maps degree `m` to degree `m − 1`; index 0 is empty.
    pub boundaries: Vec<SparseMatrix>,
    /// Internal degree from which ranks are unreliable, if capped.
    pub truncated_from: Option<usize>,
    pub fingerprint: String,
}

impl ChainComplex {
    pub fn boundary(&self, m: usize) -> Option<&SparseMatrix> {
        if m == 0 {
            None
        } else {
            self.boundaries.get(m)
        }
    }

    /// Basis sizes by reported degree.
    pub fn dimensions(&self) -> Vec<(i64, usize)> {
        self.bases
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(m, b)| (m as i64 + self.degree_shift, b.len()))
            .collect()
    }

    /// Alternating count of basis elements.
    pub fn euler_characteristic(&self) -> i64 {
        self.dimensions()
            .iter()
            .map(|&(d, n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    /// Checks `∂_{m−1} ∘ ∂_m = 0` exactly over the integers.
    pub fn check_boundary_squared(&self) -> Result<()> {
        for m in 2..self.boundaries.len() {
            let (upper, lower) = (&self.boundaries[m], &self.boundaries[m - 1]);
            let bad = upper.rows.par_iter().enumerate().find_map_any(|(r, row)| {
                let mut acc: Vec<(u32, i64)> = Vec::new();
                for &(c, v) in row {
                    for &(c2, w) in &lower.rows[c as usize] {
                        acc.push((c2, v * w));
                    }
                }
                acc.sort_unstable_by_key(|e| e.0);
                let mut i = 0;
                while i < acc.len() {
                    let mut s = 0;
                    let c = acc[i].0;
                    while i < acc.len() && acc[i].0 == c {
                        s += acc[i].1;
                        i += 1;
                    }
                    if s != 0 {
                        return Some((r, c));
                    }
                }
                None
            });
            if let Some((r, c)) = bad {
                return Err(Error::invariant(format!(
                    "boundary squared is nonzero: degree {m} basis element {r} hits degree {} element {c}",
                    m - 2
                )));
            }
        }
        Ok(())
    }
}

/// The product poset of a model with successor lists and action tables.
pub(crate) struct Compiled {
    pub size: usize,
    pub bottom: u32,
    pub top: u32,
    lin_len: Vec<usize>,
    lin: Vec<u8>,
    pub succ: Vec<Vec<u32>>,
    /// Flattened `act[g * size + x]`; empty for the trivial group.
    pub act: Vec<u32>,
    pub group_order: usize,
}

impl Compiled {
    pub fn new(model: &CollapsedNerveModel) -> Result<Self> {
        let mut radix: Vec<usize> = model.orders.iter().map(|o| o.len()).collect();
        let n_orders = radix.len();
        let lin_len: Vec<usize> = model.linear.iter().map(|(l, _)| *l).collect();
        radix.extend(lin_len.iter().map(|l| l + 1));
        let mut size: usize = 1;
        for &r in &radix {
            size = size
                .checked_mul(r)
                .filter(|&s| s <= 1 << 26)
                .ok_or_else(|| Error::resource("product poset size", u128::MAX, 1 << 26))?;
        }
        let mut stride = vec![1usize; radix.len()];
        for k in (0..radix.len().saturating_sub(1)).rev() {
            stride[k] = stride[k + 1] * radix[k + 1];
        }
        let n_lin = lin_len.len();
        let mut lin = vec![0u8; size * n_lin];
        for x in 0..size {
            for k in 0..n_lin {
                lin[x * n_lin + k] = ((x / stride[n_orders + k]) % radix[n_orders + k]) as u8;
            }
        }
        let encode = |d: &[usize]| d.iter().zip(&stride).map(|(a, s)| a * s).sum::<usize>();
        let decode = |x: usize| -> Vec<usize> { radix.iter().zip(&stride).map(|(r, s)| (x / s) % r).collect() };
        let bottom: Vec<usize> = model
            .orders
            .iter()
            .map(|o| o.bottom)
            .chain(std::iter::repeat_n(0, n_lin))
            .collect();
        let top: Vec<usize> = model
            .orders
            .iter()
            .map(|o| o.top)
            .chain(lin_len.iter().copied())
            .collect();

        let succ: Vec<Vec<u32>> = (0..size)
            .into_par_iter()
            .map(|x| {
                let d = decode(x);
                let mut options: Vec<Vec<usize>> = Vec::with_capacity(radix.len());
                for (k, &v) in d.iter().enumerate() {
                    if k < n_orders {
                        options.push(model.orders[k].up[v].ones().collect());
                    } else if v < lin_len[k - n_orders] {
                        options.push(vec![v, v + 1]);
                    } else {
                        options.push(vec![v]);
                    }
                }
                let mut out = Vec::new();
                let mut cur = vec![0usize; radix.len()];
                fn rec(k: usize, options: &[Vec<usize>], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                    if k == options.len() {
                        out.push(cur.clone());
                        return;
                    }
                    for &v in &options[k] {
                        cur[k] = v;
                        rec(k + 1, options, cur, out);
                    }
                }
                let mut all = Vec::new();
                rec(0, &options, &mut cur, &mut all);
                for y in all {
                    let e = encode(&y);
                    if e != x {
                        out.push(e as u32);
                    }
                }
                out.sort_unstable();
                out
            })
            .collect();

        let trivial = model.group.len() <= 1;
        let group_order = model.group.len().max(1);
        let act = if trivial {
            Vec::new()
        } else {
            let total = size.saturating_mul(model.group.len());
            if total > TABLE_BOUND {
                return Err(Error::resource(
                    "group action table entries",
                    total as u128,
                    TABLE_BOUND as u128,
                ));
            }
            let comp_tables: Vec<Vec<Vec<u32>>> = model
                .orders
                .iter()
                .map(|o| o.tables(&model.group))
                .collect::<Result<_>>()?;
            let mut act = vec![0u32; total];
            act.par_chunks_mut(size).enumerate().for_each(|(gi, row)| {
                let g = &model.group[gi];
                let target: Vec<usize> = model
                    .linear
                    .iter()
                    .enumerate()
                    .map(|(k, (_, role))| match role {
                        LinearRole::Fixed => k,
                        LinearRole::Permuted(i) => {
                            let j = g.apply(*i);
                            model
                                .linear
                                .iter()
                                .position(|(_, r)| *r == LinearRole::Permuted(j))
                                .unwrap()
                        }
                    })
                    .collect();
                let mut img = vec![0usize; radix.len()];
                for (x, slot) in row.iter_mut().enumerate() {
                    let d = decode(x);
                    for k in 0..n_orders {
                        img[k] = comp_tables[k][gi][d[k]] as usize;
                    }
                    for k in 0..n_lin {
                        img[n_orders + target[k]] = d[n_orders + k];
                    }
                    *slot = encode(&img) as u32;
                }
            });
            act
        };
        Ok(Compiled {
            size,
            bottom: encode(&bottom) as u32,
            top: encode(&top) as u32,
            lin_len,
            lin,
            succ,
            act,
            group_order,
        })
    }

    /// Whether deleting the middle one of three consecutive chain elements
    /// makes some linear coordinate skip a value.
    #[inline]
    pub fn skips(&self, before: u32, after: u32) -> bool {
        let n = self.lin_len.len();
        let (a, b) = (before as usize * n, after as usize * n);
        (0..n).any(|k| self.lin[b + k] > self.lin[a + k] + 1)
    }

    #[inline]
    pub fn apply(&self, g: usize, x: u32) -> u32 {
        self.act[g * self.size + x as usize]
    }
}

/// Non-collapsed chains by internal degree.
pub(crate) struct Enumeration {
    pub by_degree: Vec<Basis>,
    pub truncated: bool,
}

/// Chain enumeration and boundary assembly over a tensor product of
/// factor complexes. A basis element is the concatenation of one
/// non-collapsed chain per factor; with a single factor it is a plain chain
/// of the product poset. The group acts diagonally on all factors, and each
/// orbit is represented by its lexicographically least concatenation.
pub(crate) struct Engine {
    pub factors: Vec<Compiled>,
    group_order: usize,
    use_group: bool,
}

struct Walk<'a, F: FnMut(&[u32], &[u32])> {
    c: &'a Compiled,
    max_len: usize,
    use_group: bool,
    truncated: &'a AtomicBool,
    over: &'a AtomicBool,
    emit: F,
}

impl<F: FnMut(&[u32], &[u32])> Walk<'_, F> {
    /// Extends `prefix` to the factor top in every canonical way. `stab` is
    /// the set of group elements fixing the prefix pointwise.
    fn go(&mut self, prefix: &mut Vec<u32>, stab: &[u32]) {
        if self.over.load(Ordering::Relaxed) {
            return;
        }
        let x = *prefix.last().unwrap();
        if x == self.c.top {
            (self.emit)(prefix, stab);
            return;
        }
        if prefix.len() >= self.max_len {
            self.truncated.store(true, Ordering::Relaxed);
            return;
        }
        let mut next = Vec::with_capacity(stab.len());
        for &y in &self.c.succ[x as usize] {
            if self.use_group && !extend_stabilizer(self.c, stab, y, &mut next) {
                continue;
            }
            prefix.push(y);
            let s = std::mem::take(&mut next);
            self.go(prefix, &s);
            next = s;
            prefix.pop();
        }
    }

    /// Walks from the factor bottom; `first` restricts the first step.
    fn start(&mut self, stab: &[u32], first: Option<u32>) {
        let c = self.c;
        if c.bottom == c.top {
            if first.is_none() {
                (self.emit)(&[c.bottom], stab);
            }
            return;
        }
        if self.max_len < 2 {
            self.truncated.store(true, Ordering::Relaxed);
            return;
        }
        let mut next = Vec::new();
        let firsts: Vec<u32> = match first {
            Some(y) => vec![y],
            None => c.succ[c.bottom as usize].clone(),
        };
        for y in firsts {
            if self.use_group && !extend_stabilizer(c, stab, y, &mut next) {
                continue;
            }
            let s = std::mem::take(&mut next);
            self.go(&mut vec![c.bottom, y], &s);
            next = s;
        }
    }
}

/// Filters `stab` to the elements fixing `y` into `out`; returns false when
/// some element maps `y` below itself, so the extension is not canonical.
#[inline]
fn extend_stabilizer(c: &Compiled, stab: &[u32], y: u32, out: &mut Vec<u32>) -> bool {
    out.clear();
    for &g in stab {
        let gy = c.apply(g as usize, y);
        if gy < y {
            return false;
        }
        if gy == y {
            out.push(g);
        }
    }
    true
}

/// A partially built basis element: chains of the leading factors.
struct Partial {
    prefix: Vec<u32>,
    stab: Vec<u32>,
    degree: usize,
}

impl Engine {
    pub fn new(factors: Vec<Compiled>) -> Self {
        let group_order = factors.first().map_or(1, |f| f.group_order);
        let use_group = factors.iter().any(|f| !f.act.is_empty());
        Engine {
            factors,
            group_order,
            use_group,
        }
    }

    /// Position ranges `(start, end)` (inclusive) of the factor chains
    /// inside a concatenated basis element.
    pub fn split(&self, chain: &[u32]) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut pos = 0;
        for f in &self.factors {
            let end = pos
                + chain[pos..]
                    .iter()
                    .position(|&x| x == f.top)
                    .expect("factor chain ends at top");
            out.push((pos, end));
            pos = end + 1;
        }
        out
    }

    /// Replaces `chain` by the lexicographically least element of its orbit.
    /// Factor ends are fixed by every group element.
    pub fn canonicalize(&self, chain: &mut [u32], cands: &mut Vec<u32>) {
        if !self.use_group {
            return;
        }
        cands.clear();
        cands.extend(0..self.group_order as u32);
        for (f, (s, e)) in self.factors.iter().zip(self.split(chain)) {
            for slot in chain[s + 1..e].iter_mut() {
                let orig = *slot;
                if cands.len() == 1 {
                    *slot = f.apply(cands[0] as usize, orig);
                    continue;
                }
                let best = cands.iter().map(|&g| f.apply(g as usize, orig)).min().unwrap();
                cands.retain(|&g| f.apply(g as usize, orig) == best);
                *slot = best;
            }
        }
    }

    /// Non-collapsed basis elements up to internal degree `max_degree`. With
    /// `canonical`, one representative per orbit.
    pub fn enumerate(&self, max_degree: usize, canonical: bool, bound: usize) -> Result<Enumeration> {
        let counter = AtomicUsize::new(0);
        let truncated = AtomicBool::new(false);
        let over = AtomicBool::new(false);
        let use_group = canonical && self.use_group;
        let all: Vec<u32> = if use_group {
            (0..self.group_order as u32).collect()
        } else {
            Vec::new()
        };
        let k = self.factors.len();

        let mut states = vec![Partial {
            prefix: Vec::new(),
            stab: all,
            degree: 0,
        }];
        for f in &self.factors[..k - 1] {
            states = states
                .par_iter()
                .flat_map_iter(|st| {
                    let mut out = Vec::new();
                    let mut w = Walk {
                        c: f,
                        max_len: max_degree - st.degree + 1,
                        use_group,
                        truncated: &truncated,
                        over: &over,
                        emit: |chain: &[u32], stab: &[u32]| {
                            out.push(Partial {
                                prefix: [st.prefix.as_slice(), chain].concat(),
                                stab: stab.to_vec(),
                                degree: st.degree + chain.len() - 1,
                            })
                        },
                    };
                    w.start(&st.stab, None);
                    out
                })
                .collect();
            if states.len() > bound {
                return Err(Error::resource(
                    "orbit chain enumeration",
                    states.len() as u128,
                    bound as u128,
                ));
            }
        }

        let last = &self.factors[k - 1];
        let tasks: Vec<(usize, Option<u32>)> = states
            .iter()
            .enumerate()
            .flat_map(|(i, _)| {
                if last.bottom == last.top {
                    vec![(i, None)]
                } else {
                    last.succ[last.bottom as usize].iter().map(|&y| (i, Some(y))).collect()
                }
            })
            .collect();
        let parts: Vec<Vec<Vec<u32>>> = tasks
            .par_iter()
            .map(|&(i, first)| {
                let st = &states[i];
                let mut out: Vec<Vec<u32>> = Vec::new();
                let mut local = 0usize;
                let mut w = Walk {
                    c: last,
                    max_len: max_degree - st.degree + 1,
                    use_group,
                    truncated: &truncated,
                    over: &over,
                    emit: |chain: &[u32], _: &[u32]| {
                        let m = st.degree + chain.len() - 1;
                        if out.len() <= m {
                            out.resize(m + 1, Vec::new());
                        }
                        out[m].extend_from_slice(&st.prefix);
                        out[m].extend_from_slice(chain);
                        local += 1;
                        if local == 4096 {
                            if counter.fetch_add(local, Ordering::Relaxed) + local > bound {
                                over.store(true, Ordering::Relaxed);
                            }
                            local = 0;
                        }
                    },
                };
                w.start(&st.stab, first);
                out
            })
            .collect();

        let width_extra = k;
        let produced: usize = parts
            .iter()
            .flat_map(|p| p.iter().enumerate().map(|(m, d)| d.len() / (m + width_extra)))
            .sum();
        if over.load(Ordering::Relaxed) || produced > bound {
            let seen = counter.load(Ordering::Relaxed).max(produced);
            return Err(Error::resource("orbit chain enumeration", seen as u128, bound as u128));
        }
        let top_degree = parts.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_degree: Vec<Basis> = (0..top_degree)
            .map(|m| Basis {
                width: m + width_extra,
                data: Vec::new(),
            })
            .collect();
        for p in parts {
            for (m, data) in p.into_iter().enumerate() {
                by_degree[m].data.extend(data);
            }
        }
        Ok(Enumeration {
            by_degree,
            truncated: truncated.load(Ordering::Relaxed),
        })
    }

    /// Boundary matrices `∂(x ⊗ y) = ∂x ⊗ y + (−1)^{|x|} x ⊗ ∂y`, each factor
    /// boundary being the alternating sum of non-collapsed faces.
    pub fn boundaries(&self, bases: &[Basis]) -> Result<Vec<SparseMatrix>> {
        let mut out = vec![SparseMatrix::new(0)];
        for m in 1..bases.len() {
            let lower = &bases[m - 1];
            let index: HashMap<&[u32], u32> = lower.iter().enumerate().map(|(i, ch)| (ch, i as u32)).collect();
            let rows: Result<Vec<Vec<(u32, i64)>>> = bases[m]
                .data
                .par_chunks(bases[m].width)
                .map_init(
                    || (Vec::new(), Vec::new()),
                    |(face, cands), chain| {
                        let mut row = Vec::with_capacity(m);
                        let mut before = 0usize;
                        for (f, (s, e)) in self.factors.iter().zip(self.split(chain)) {
                            for i in s + 1..e {
                                if f.skips(chain[i - 1], chain[i + 1]) {
                                    continue;
                                }
                                face.clear();
                                face.extend_from_slice(&chain[..i]);
                                face.extend_from_slice(&chain[i + 1..]);
                                self.canonicalize(face, cands);
                                let Some(&col) = index.get(face.as_slice()) else {
                                    return Err(Error::invariant(format!(
                                        "face {face:?} of basis element {chain:?} has no orbit representative"
                                    )));
                                };
                                row.push((col, if (before + i - s).is_multiple_of(2) { 1 } else { -1 }));
                            }
                            before += e - s;
                        }
                        Ok(row)
                    },
                )
                .collect();
            let mut mat = SparseMatrix::new(lower.len());
            for r in rows? {
                mat.push_row(r);
            }
            out.push(mat);
        }
        Ok(out)
    }
}

/// Number of non-collapsed chains (before taking orbits), by dynamic
/// programming over the successor graph.
pub(crate) fn count_chains(c: &Compiled) -> u128 {
    let mut paths = vec![0u128; c.size];
    // A successor has a larger mixed-radix code, so decreasing index order
    // visits successors first.
    for x in (0..c.size).rev() {
        paths[x] = if x as u32 == c.top {
            1
        } else {
            c.succ[x]
                .iter()
                .map(|&y| paths[y as usize])
                .fold(0u128, |a, b| a.saturating_add(b))
        };
    }
    paths[c.bottom as usize]
}
