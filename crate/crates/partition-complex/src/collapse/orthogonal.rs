//! Invisibility, orthogonal chains and orthogonality trees.

use serde::Serialize;

use super::fan::{Fan, View};
use crate::error::{Error, Result};
use crate::poset_core::{orbits, Chain, Orbit};

/// Why a chain is invisible: the recursive choices made while unfolding the
/// definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// The restricted fan has no functions left.
    EmptyFan,
    /// The first function sends the bottom of the interval to its top.
    Top,
    /// The chain element `y` (or the top of the interval, when `top` is
    /// set) is orthogonal to the first value, and both restricted parts are
    /// invisible.
    Split {
        y: usize,
        top: bool,
        left: Box<Witness>,
        right: Box<Witness>,
    },
}

impl Witness {
    /// The orthogonal subchain carried by the witness.
    pub fn orthogonal_subchain(&self) -> Chain {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Chain) {
        if let Witness::Split { y, top, left, right } = self {
            left.collect(out);
            if !top {
                out.push(*y);
            }
            right.collect(out);
        }
    }
}

impl Fan<'_> {
    /// Decides invisibility of a chain `σ` of the proper part, returning
    /// the witness when it is invisible.
    pub fn invisibility_witness(&self, sigma: &[usize]) -> Option<Witness> {
        self.witness_in(&self.root_view(), sigma)
    }

    pub fn is_invisible(&self, sigma: &[usize]) -> bool {
        self.invisibility_witness(sigma).is_some()
    }

    fn witness_in(&self, view: &View, sigma: &[usize]) -> Option<Witness> {
        let Some(first) = view.funcs.first() else {
            return Some(Witness::EmptyFan);
        };
        let x = self.eval(first, &[view.lo]);
        if x == view.hi {
            return Some(Witness::Top);
        }
        for pos in self.perp_positions(x, view.lo, view.hi, sigma) {
            let top = pos == sigma.len();
            let y = if top { view.hi } else { sigma[pos] };
            let left = self.witness_in(&view.left(y), &sigma[..pos]);
            let right = left
                .as_ref()
                .and_then(|_| self.witness_in(&view.right(y), sigma.get(pos + 1..).unwrap_or(&[])));
            if let (Some(left), Some(right)) = (left, right) {
                return Some(Witness::Split {
                    y,
                    top,
                    left: Box::new(left),
                    right: Box::new(right),
                });
            }
        }
        None
    }

    /// All minimally invisible chains, generated by unfolding the
    /// recursive definition: for each `y` orthogonal to the first value,
    /// an orthogonal chain below `y`, then `y` itself, then one above.
    pub(crate) fn generate_orthogonal(&self, view: &View, out: &mut Vec<Chain>, bound: usize) -> Result<()> {
        let Some(first) = view.funcs.first() else {
            out.push(Vec::new());
            return Ok(());
        };
        let x = self.eval(first, &[view.lo]);
        if x == view.hi {
            out.push(Vec::new());
            return Ok(());
        }
        let l = self.lattice;
        let mut candidates: Vec<usize> = l
            .up_set(view.lo)
            .ones()
            .filter(|&y| y != view.lo && y != view.hi && l.leq(y, view.hi))
            .filter(|&y| l.meet(y, x) == view.lo && l.join(y, x) == view.hi)
            .collect();
        if x == view.lo {
            candidates.push(view.hi);
        }
        for y in candidates {
            let mut lower = Vec::new();
            self.generate_orthogonal(&view.left(y), &mut lower, bound)?;
            if lower.is_empty() {
                continue;
            }
            let mut upper = Vec::new();
            self.generate_orthogonal(&view.right(y), &mut upper, bound)?;
            for a in &lower {
                for b in &upper {
                    let mut c = a.clone();
                    if y != view.hi {
                        c.push(y);
                    }
                    c.extend_from_slice(b);
                    out.push(c);
                    if out.len() > bound {
                        return Err(Error::resource("orthogonal chains", out.len() as u128, bound as u128));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Default bound on the number of orthogonal chains produced.
pub const ORTHOGONAL_BOUND: usize = 5_000_000;

/// An orthogonal chain with the open intervals of its wedge summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalChain {
    pub chain: Chain,
    /// `(0̂, y_0), (y_0, y_1), …, (y_r, 1̂)` as pairs of endpoints.
    pub intervals: Vec<(usize, usize)>,
}

/// One group orbit of orthogonal chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalOrbit {
    pub representative: usize,
    pub size: usize,
    pub stabilizer_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalSet {
    pub chains: Vec<OrthogonalChain>,
    pub orbits: Vec<OrthogonalOrbit>,
}

/// The value at `[0̂]` of the first function of `fan` that does not send
/// `[0̂]` to `0̂`, which must differ from `1̂`.
///
/// While `F_1([0̂]) = 0̂`, the only element orthogonal to it is `1̂`, and a
/// chain is invisible for `(F_1, …, F_r)` exactly when it is invisible for
/// `(F_2, …, F_r)`. Leading functions with value `0̂` are therefore skipped
/// before the hypothesis `F_1([0̂]) ≠ 0̂, 1̂` is applied.
pub fn effective_first_value(fan: &Fan) -> Result<usize> {
    let l = fan.lattice;
    for i in 0..fan.len() {
        let x = fan.value(i, &[l.bottom()]);
        if x == l.bottom() {
            continue;
        }
        if x == l.top() {
            return Err(Error::Precondition(format!(
                "F_{}([0̂]) = 1̂, so every chain is invisible",
                i + 1
            )));
        }
        return Ok(x);
    }
    Err(Error::Precondition(
        "every function sends [0̂] to 0̂, so every chain is invisible".into(),
    ))
}

/// All chains orthogonal to `fan`, sorted, with their interval data and
/// their decomposition into orbits of the fan's group.
///
/// No hypothesis on `F_1([0̂])` is needed here. When every chain is
/// invisible the result is the empty chain alone, whose wedge summand is
/// `|(0̂, 1̂)|^◇`.
pub fn orthogonal_chains(fan: &Fan) -> Result<OrthogonalSet> {
    let l = fan.lattice;
    let mut chains = Vec::new();
    fan.generate_orthogonal(&fan.root_view(), &mut chains, ORTHOGONAL_BOUND)?;
    chains.sort();
    chains.dedup();
    let with_intervals: Vec<OrthogonalChain> = chains
        .iter()
        .map(|c| {
            let ext: Vec<usize> = std::iter::once(l.bottom())
                .chain(c.iter().copied())
                .chain(std::iter::once(l.top()))
                .collect();
            OrthogonalChain {
                chain: c.clone(),
                intervals: ext.windows(2).map(|w| (w[0], w[1])).collect(),
            }
        })
        .collect();
    let group_order = fan.group.order()?;
    let found: Vec<Orbit> = orbits(&fan.group, &chains, |g, c| {
        c.iter().map(|&y| l.act_element(g, y).unwrap()).collect()
    })?;
    let orbit_summaries = found
        .iter()
        .map(|o| OrthogonalOrbit {
            representative: o.representative,
            size: o.members.len(),
            stabilizer_order: group_order / o.members.len(),
        })
        .collect();
    Ok(OrthogonalSet {
        chains: with_intervals,
        orbits: orbit_summaries,
    })
}

/// A node of the orthogonality tree, labelled `(Z ∈ [lo, hi])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub z: usize,
    pub lo: usize,
    pub hi: usize,
    /// For an inner node: the orthogonal element `y`, the left subtree
    /// (absent when the restricted fan is empty) and the right subtree.
    pub split: Option<(usize, Option<Box<TreeNode>>, Box<TreeNode>)>,
}

impl TreeNode {
    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        self.push_leaves(&mut out);
        out
    }

    fn push_leaves<'t>(&'t self, out: &mut Vec<&'t TreeNode>) {
        match &self.split {
            None => out.push(self),
            Some((_, left, right)) => {
                if let Some(left) = left {
                    left.push_leaves(out);
                }
                right.push_leaves(out);
            }
        }
    }

    /// A chain is invisible at a leaf exactly when `Z` is the top of the
    /// leaf's interval.
    pub fn invisible_at(&self) -> bool {
        self.z == self.hi
    }
}

impl Fan<'_> {
    /// The orthogonality tree of a chain of the proper part, or `None` for
    /// the empty fan.
    pub fn orthogonality_tree(&self, sigma: &[usize]) -> Option<TreeNode> {
        self.tree_in(&self.root_view(), sigma)
    }

    fn tree_in(&self, view: &View, sigma: &[usize]) -> Option<TreeNode> {
        let first = view.funcs.first()?;
        let z = self.eval(first, &[view.lo]);
        let mut node = TreeNode {
            z,
            lo: view.lo,
            hi: view.hi,
            split: None,
        };
        if z == view.hi {
            return Some(node);
        }
        if let Some(&pos) = self.perp_positions(z, view.lo, view.hi, sigma).first() {
            let y = sigma.get(pos).copied().unwrap_or(view.hi);
            let left = self.tree_in(&view.left(y), &sigma[..pos]).map(Box::new);
            let right = self
                .tree_in(&view.right(y), sigma.get(pos + 1..).unwrap_or(&[]))
                .expect("right restriction keeps every function");
            node.split = Some((y, left, Box::new(right)));
        }
        Some(node)
    }
}
