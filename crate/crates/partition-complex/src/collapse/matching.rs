//! The Morse matching on visible chains and its independent verification.

use std::collections::HashMap;

use serde::Serialize;

use super::fan::Fan;
use super::orthogonal::effective_first_value;
use crate::error::{Error, Result};
use crate::poset_core::{Chain, FiniteLattice};

/// Default bound on the number of chains enumerated for a matching.
pub const MATCHING_CHAIN_BOUND: usize = 5_000_000;

/// All nonempty chains of elements strictly between `lo` and `hi`, in
/// lexicographic order.
pub fn open_chains(l: &FiniteLattice, lo: usize, hi: usize, bound: usize) -> Result<Vec<Chain>> {
    let inner: Vec<usize> = l
        .up_set(lo)
        .ones()
        .filter(|&y| y != lo && y != hi && l.leq(y, hi))
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    extend_chains(l, &inner, &mut stack, &mut out, bound)?;
    Ok(out)
}

fn extend_chains(
    l: &FiniteLattice,
    inner: &[usize],
    stack: &mut Chain,
    out: &mut Vec<Chain>,
    bound: usize,
) -> Result<()> {
    for &y in inner {
        if stack.last().is_none_or(|&last| l.lt(last, y)) {
            stack.push(y);
            out.push(stack.clone());
            if out.len() > bound {
                return Err(Error::resource("chains", out.len() as u128, bound as u128));
            }
            extend_chains(l, inner, stack, out, bound)?;
            stack.pop();
        }
    }
    Ok(())
}

/// Outcome of each independent check on a matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingChecks {
    /// Every partner is visible, differs by exactly one element, and is
    /// matched back.
    pub perfect: bool,
    /// Exactly one chain is unmatched, the vertex given by
    /// [`effective_first_value`].
    pub fixed: bool,
    /// Matching commutes with every generator of the group.
    pub equivariant: bool,
    /// The Hasse digraph with matched edges reversed has no directed cycle.
    pub acyclic: bool,
    /// The alternating count of visible chains by dimension is 1.
    pub euler: bool,
}

impl MatchingChecks {
    pub fn all(&self) -> bool {
        self.perfect && self.fixed && self.equivariant && self.acyclic && self.euler
    }
}

/// A matching on the visible chains of the proper part.
#[derive(Clone, Debug, Serialize)]
pub struct Matching {
    pub fan: String,
    pub visible_count: usize,
    pub invisible_count: usize,
    pub orthogonal_count: usize,
    /// Matched pairs `(σ, σ ∪ {t})`.
    pub pairs: Vec<(Chain, Chain)>,
    /// Unmatched visible chains.
    pub fixed: Vec<Chain>,
    pub checks: MatchingChecks,
}

/// The matching partner prescribed by the structure triple of `σ`, or
/// `None` when `σ` is invisible. The empty chain stands for the partner of
/// `[F_1([0̂])]`.
pub fn matching_partner(fan: &Fan, sigma: &[usize]) -> Result<Option<Chain>> {
    let l = fan.lattice;
    let Some(tree) = fan.orthogonality_tree(sigma) else {
        return Ok(None);
    };
    let leaves = tree.leaves();
    let Some(leaf) = leaves.into_iter().find(|w| !w.invisible_at()) else {
        return Ok(None);
    };
    let z = leaf.z;
    let ext: Vec<usize> = std::iter::once(l.bottom())
        .chain(sigma.iter().copied())
        .chain(std::iter::once(l.top()))
        .collect();
    let witness = || {
        format!(
            "chain {} at leaf ({} in [{}, {}])",
            chain_label(l, sigma),
            l.label(z),
            l.label(leaf.lo),
            l.label(leaf.hi)
        )
    };
    let alpha = ext
        .iter()
        .position(|&y| y == leaf.lo)
        .ok_or_else(|| Error::invariant(witness()))?;
    let omega = ext
        .iter()
        .position(|&y| y == leaf.hi)
        .ok_or_else(|| Error::invariant(witness()))?;
    let i = (alpha..omega)
        .rev()
        .find(|&i| l.meet(ext[i], z) == leaf.lo)
        .ok_or_else(|| Error::invariant(witness()))?;
    let reach = l.join(ext[i], z);
    let j = (i..omega)
        .rev()
        .find(|&j| l.leq(ext[j], reach))
        .ok_or_else(|| Error::invariant(witness()))?;
    let t = l.meet(reach, ext[j + 1]);
    let mut partner = ext.clone();
    if ext[j] != t {
        if !l.lt(ext[j], t) || t == ext[j + 1] {
            return Err(Error::invariant(format!(
                "insertion of {} fails for {}",
                l.label(t),
                witness()
            )));
        }
        partner.insert(j + 1, t);
    } else {
        if j == 0 {
            return Err(Error::invariant(format!("deletion of 0̂ requested for {}", witness())));
        }
        partner.remove(j);
    }
    partner.remove(0);
    partner.pop();
    Ok(Some(partner))
}

fn chain_label(l: &FiniteLattice, c: &[usize]) -> String {
    let parts: Vec<String> = c.iter().map(|&y| l.label(y)).collect();
    format!("[{}]", parts.join(" < "))
}

/// Builds the matching on all visible chains and verifies it.
///
/// The checks use only the list of visible chains and the partner map, not
/// the tree that produced it. Any failed check is an invariant violation
/// whose message names a witness chain.
pub fn build_matching(fan: &Fan) -> Result<Matching> {
    let matching = build_matching_unchecked(fan)?;
    if let Some(problem) = &matching.1 {
        return Err(Error::invariant(problem.clone()));
    }
    Ok(matching.0)
}

/// Builds and checks the matching, returning the first failure message
/// instead of an error.
pub fn build_matching_unchecked(fan: &Fan) -> Result<(Matching, Option<String>)> {
    let x = effective_first_value(fan)?;
    let l = fan.lattice;
    let all = open_chains(l, l.bottom(), l.top(), MATCHING_CHAIN_BOUND)?;
    let mut visible: Vec<Chain> = Vec::new();
    let mut partner_of: Vec<Option<Chain>> = Vec::new();
    let mut invisible_count = 0;
    let mut orthogonal_count = 0;
    for c in &all {
        match matching_partner(fan, c)? {
            Some(p) => {
                visible.push(c.clone());
                partner_of.push(Some(p).filter(|p| !p.is_empty()));
            }
            None => {
                invisible_count += 1;
                if is_minimal_invisible(fan, c) {
                    orthogonal_count += 1;
                }
            }
        }
    }
    let index: HashMap<&[usize], usize> = visible.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let mut problem: Option<String> = None;
    let mut note = |msg: String| {
        if problem.is_none() {
            problem = Some(msg);
        }
    };

    // Perfect: partners are visible faces or cofaces, matched back.
    let mut mate: Vec<Option<usize>> = vec![None; visible.len()];
    let mut perfect = true;
    for (a, p) in partner_of.iter().enumerate() {
        let Some(p) = p else { continue };
        let Some(&b) = index.get(p.as_slice()) else {
            perfect = false;
            note(format!(
                "partner {} of {} is not visible",
                chain_label(l, p),
                chain_label(l, &visible[a])
            ));
            continue;
        };
        let back = partner_of[b].as_ref();
        if back != Some(&visible[a]) || !differs_by_one(&visible[a], p) {
            perfect = false;
            note(format!(
                "{} and {} are not matched to each other",
                chain_label(l, &visible[a]),
                chain_label(l, p)
            ));
        }
        mate[a] = Some(b);
    }

    // Fixed point.
    let fixed: Vec<Chain> = (0..visible.len())
        .filter(|&a| mate[a].is_none())
        .map(|a| visible[a].clone())
        .collect();
    let fixed_ok = fixed == [vec![x]];
    if !fixed_ok {
        note(format!(
            "unmatched chains {:?} differ from [{}]",
            fixed.iter().map(|c| chain_label(l, c)).collect::<Vec<_>>(),
            l.label(x)
        ));
    }

    // Equivariance on generators.
    let tables = l.action_tables(&fan.group.generators)?;
    let mut equivariant = true;
    'outer: for table in &tables {
        let act = |c: &[usize]| -> Chain { c.iter().map(|&y| table[y] as usize).collect() };
        for (a, c) in visible.iter().enumerate() {
            let image = act(c);
            let Some(&b) = index.get(image.as_slice()) else {
                equivariant = false;
                note(format!("image of visible {} is invisible", chain_label(l, c)));
                break 'outer;
            };
            let lhs = mate[a].map(|m| act(&visible[m]));
            let rhs = mate[b].map(|m| visible[m].clone());
            if lhs != rhs {
                equivariant = false;
                note(format!(
                    "matching does not commute with the group at {}",
                    chain_label(l, c)
                ));
                break 'outer;
            }
        }
    }

    // Acyclicity: edges go down along faces, except matched edges which go up.
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); visible.len()];
    for (a, c) in visible.iter().enumerate() {
        for k in 0..c.len() {
            if c.len() == 1 {
                break;
            }
            let mut face = c.clone();
            face.remove(k);
            let Some(&f) = index.get(face.as_slice()) else { continue };
            if mate[f] == Some(a) {
                out_edges[f].push(a);
            } else {
                out_edges[a].push(f);
            }
        }
    }
    let acyclic = match find_cycle(&out_edges) {
        None => true,
        Some(v) => {
            note(format!("directed cycle through {}", chain_label(l, &visible[v])));
            false
        }
    };

    let euler_sum: i64 = visible.iter().map(|c| if c.len() % 2 == 1 { 1 } else { -1 }).sum();
    let euler = euler_sum == 1;
    if !euler {
        note(format!("alternating count of visible chains is {euler_sum}"));
    }

    let pairs: Vec<(Chain, Chain)> = (0..visible.len())
        .filter_map(|a| {
            mate[a]
                .filter(|&b| visible[a].len() < visible[b].len())
                .map(|b| (visible[a].clone(), visible[b].clone()))
        })
        .collect();
    let matching = Matching {
        fan: fan.name.clone(),
        visible_count: visible.len(),
        invisible_count,
        orthogonal_count,
        pairs,
        fixed,
        checks: MatchingChecks {
            perfect,
            fixed: fixed_ok,
            equivariant,
            acyclic,
            euler,
        },
    };
    Ok((matching, problem))
}

/// True when no chain obtained from the invisible chain `c` by deleting one
/// element is invisible. The empty chain is visible once `F_1([0̂])` is
/// neither `0̂` nor `1̂`, and invisibility passes to superchains, so this
/// is minimality.
fn is_minimal_invisible(fan: &Fan, c: &[usize]) -> bool {
    (0..c.len()).all(|k| {
        let mut face = c.to_vec();
        face.remove(k);
        face.is_empty() || !fan.is_invisible(&face)
    })
}

fn differs_by_one(a: &[usize], b: &[usize]) -> bool {
    let (short, long) = if a.len() < b.len() { (a, b) } else { (b, a) };
    long.len() == short.len() + 1
        && (0..long.len()).any(|k| {
            let mut c = long.to_vec();
            c.remove(k);
            c == short
        })
}

/// Returns a vertex on a directed cycle, if any, by iterative depth-first
/// search with three colours.
fn find_cycle(edges: &[Vec<usize>]) -> Option<usize> {
    let mut colour = vec![0u8; edges.len()];
    for start in 0..edges.len() {
        if colour[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        colour[start] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = edges[v].get(*next) {
                *next += 1;
                match colour[w] {
                    0 => {
                        colour[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return Some(w),
                    _ => {}
                }
            } else {
                colour[v] = 2;
                stack.pop();
            }
        }
    }
    None
}
