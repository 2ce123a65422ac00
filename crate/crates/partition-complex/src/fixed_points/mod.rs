//! Fixed points of partition complexes under subgroups of `Σ_n`.
//!
//! The fixed subposet `Π_n^G` is the lattice of `G`-invariant partitions.
//! Its homology is governed by the orbit structure of `G`: it vanishes
//! unless all orbits are isomorphic `G`-sets, and in the isotypical case it
//! splits into copies of `(|Π_d^G|)^◇ ∧ |Π_m|^◇` indexed by the complements
//! of the orbit partition.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{betti_numbers, BettiTable, Field};
use crate::lyndon::factorial;
use crate::poset_core::subspace::is_prime;
use crate::poset_core::{bell_number, FiniteLattice, GroupAction, Partition, Permutation, MATERIALIZE_BOUND};
use crate::simplicial::{nerve_model, orbit_chain_complex_with, ChainBasis, NerveEnds, DEFAULT_CHAIN_BOUND};

/// Largest group handled by the brute-force subgroup enumeration.
pub const SUBGROUP_ORDER_BOUND: usize = 64;

fn check_degree(n: usize, group: &GroupAction) -> Result<()> {
    if n < 2 {
        return Err(Error::arg("fixed points need n >= 2"));
    }
    if group.degree != n {
        return Err(Error::arg(format!(
            "group acts on {} points, expected {n}",
            group.degree
        )));
    }
    Ok(())
}

/// All partitions of `{0..n-1}` fixed by every generator of `group`.
pub fn invariant_partitions(n: usize, group: &GroupAction) -> Result<Vec<Partition>> {
    check_degree(n, group)?;
    let bell = bell_number(n);
    if bell > MATERIALIZE_BOUND as u128 {
        return Err(Error::resource(
            format!("partitions of {n} points"),
            bell,
            MATERIALIZE_BOUND as u128,
        ));
    }
    Ok(Partition::all(n)
        .into_iter()
        .filter(|p| group.generators.iter().all(|g| &p.act(g) == p))
        .collect())
}

/// The lattice `Π_n^G ∪ {0̂, 1̂}` of invariant partitions. Meets and joins
/// of invariant partitions are invariant, so this is a sublattice.
pub fn fixed_subposet(n: usize, group: &GroupAction) -> Result<FiniteLattice> {
    FiniteLattice::from_partitions(invariant_partitions(n, group)?)
}

/// Reduced Betti numbers of `|Π_n^G|`. An empty proper part has the
/// homology of the `(−1)`-sphere.
pub fn fixed_point_betti(n: usize, group: &GroupAction, field: Field) -> Result<BettiTable> {
    let l = fixed_subposet(n, group)?;
    lattice_betti(l, field)
}

fn lattice_betti(l: FiniteLattice, field: Field) -> Result<BettiTable> {
    if l.len() <= 2 {
        return Ok(BettiTable::from_pairs(field, &[(-1, 1)]));
    }
    let model = nerve_model(Arc::new(l), NerveEnds::Open);
    let complex = orbit_chain_complex_with(&model, field, ChainBasis::FactorTensor, DEFAULT_CHAIN_BOUND)?;
    Ok(betti_numbers(&complex))
}

/// How `G` acts on the points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ActionKind {
    /// Some two orbits are not isomorphic as `G`-sets.
    NonIsotypical,
    /// `m` orbits, all isomorphic to one orbit of size `d`.
    Isotypical { d: usize, m: usize },
    /// A single orbit.
    Transitive { d: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionClassification {
    pub kind: ActionKind,
    /// The partition into `G`-orbits.
    pub orbit_partition: Partition,
    /// Whether all orbits are isomorphic `G`-sets.
    pub orbits_isomorphic: bool,
    /// Number of invariant partitions complementary to the orbit partition,
    /// `0̂` and `1̂` included.
    pub complements: usize,
    /// For isotypical actions: a permutation sending the `j`-th orbit onto
    /// the block `{jd, …, jd + d − 1}` such that the conjugated group acts
    /// by the same permutation on every block.
    pub relabeling: Option<Permutation>,
}

/// Orbits of the points, each sorted, ordered by their least point.
pub fn point_orbits(group: &GroupAction) -> Vec<Vec<usize>> {
    let n = group.degree;
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in &group.generators {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// A `G`-equivariant bijection from the orbit of `a` to the orbit of `b`,
/// if the stabilizers of `a` and of some point of the orbit of `b` agree.
fn orbit_isomorphism(elements: &[Permutation], a: usize, orbit_b: &[usize]) -> Option<BTreeMap<usize, usize>> {
    let stab = |x: usize| -> BTreeSet<&Permutation> { elements.iter().filter(|g| g.apply(x) == x).collect() };
    let sa = stab(a);
    let b = orbit_b.iter().copied().find(|&b| stab(b) == sa)?;
    let mut map = BTreeMap::new();
    for g in elements {
        map.insert(g.apply(a), g.apply(b));
    }
    Some(map)
}

/// Classifies the action by comparing orbit stabilizers, and independently
/// by asking whether the orbit partition has a complement among the
/// invariant partitions. The two answers must agree.
pub fn classify_action(n: usize, group: &GroupAction) -> Result<ActionClassification> {
    check_degree(n, group)?;
    let elements = group.elements()?;
    let orbits = point_orbits(group);
    let labels: Vec<usize> = {
        let mut v = vec![0; n];
        for (j, o) in orbits.iter().enumerate() {
            for &x in o {
                v[x] = j;
            }
        }
        v
    };
    let orbit_partition = Partition::from_labels(&labels);
    let isos: Option<Vec<BTreeMap<usize, usize>>> = orbits
        .iter()
        .map(|o| orbit_isomorphism(&elements, orbits[0][0], o))
        .collect();
    let orbits_isomorphic = isos.is_some();

    let l = fixed_subposet(n, group)?;
    let x = l
        .index_of(&orbit_partition)
        .ok_or_else(|| Error::invariant("orbit partition is not invariant"))?;
    let complements = (0..l.len()).filter(|&y| l.perp(x, y)).count();
    if orbits_isomorphic != (complements > 0) {
        return Err(Error::invariant(format!(
            "orbit isomorphism says {orbits_isomorphic} but the orbit partition {orbit_partition} has {complements} complements"
        )));
    }

    let d = orbits[0].len();
    let m = orbits.len();
    let (kind, relabeling) = match isos {
        None => (ActionKind::NonIsotypical, None),
        Some(isos) => {
            let kind = if m == 1 {
                ActionKind::Transitive { d }
            } else {
                ActionKind::Isotypical { d, m }
            };
            let first = &orbits[0];
            let mut image = vec![0; n];
            for (j, iso) in isos.iter().enumerate() {
                for (k, a) in first.iter().enumerate() {
                    image[iso[a]] = j * d + k;
                }
            }
            let pi = Permutation::from_images(image)?;
            check_diagonal(&pi, group, d, m)?;
            (kind, Some(pi))
        }
    };
    Ok(ActionClassification {
        kind,
        orbit_partition,
        orbits_isomorphic,
        complements,
        relabeling,
    })
}

/// Checks that `π g π^{-1}` preserves every block of size `d` and acts on
/// each block by the same permutation.
fn check_diagonal(pi: &Permutation, group: &GroupAction, d: usize, m: usize) -> Result<()> {
    let inv = pi.inverse();
    for g in &group.generators {
        let h = pi.compose(g).compose(&inv);
        for j in 0..m {
            for k in 0..d {
                let y = h.apply(j * d + k);
                if y / d != j || y % d != h.apply(k) % d {
                    return Err(Error::invariant(format!("relabeled generator {h} is not diagonal")));
                }
            }
        }
    }
    Ok(())
}

/// The intermediate subgroup poset of a transitive group compared with its
/// invariant partitions.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupCorrespondence {
    pub group_order: usize,
    pub stabilizer_order: usize,
    /// Each intermediate subgroup `H ⊆ K ⊆ G` by order, with the partition
    /// into translates of the `K`-orbit of the first point.
    pub subgroups: Vec<(usize, Partition)>,
    pub invariant_partitions: usize,
    pub bijective: bool,
    /// `K ⊆ K′` exactly when the partition of `K` refines that of `K′`.
    pub order_preserving: bool,
}

impl SubgroupCorrespondence {
    pub fn holds(&self) -> bool {
        self.bijective && self.order_preserving
    }
}

/// Enumerates the subgroups between the stabilizer of the first point and
/// `G` by closing under one extra element at a time, maps each to its coset
/// partition, and checks this is an order isomorphism onto the invariant
/// partitions.
pub fn invariant_partitions_as_subgroups(group: &GroupAction) -> Result<SubgroupCorrespondence> {
    let n = group.degree;
    check_degree(n, group)?;
    if point_orbits(group).len() != 1 {
        return Err(Error::Precondition("the group is not transitive".into()));
    }
    let elements = group.elements_bounded(SUBGROUP_ORDER_BOUND)?;
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mul = |a: usize, b: usize| index[&elements[a].compose(&elements[b])];
    let close = |seed: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut set = seed.clone();
        loop {
            let products: Vec<usize> = set
                .iter()
                .flat_map(|&a| set.iter().map(move |&b| (a, b)))
                .map(|(a, b)| mul(a, b))
                .collect();
            let before = set.len();
            set.extend(products);
            if set.len() == before {
                return set;
            }
        }
    };
    let stabilizer: BTreeSet<usize> = (0..elements.len()).filter(|&i| elements[i].apply(0) == 0).collect();
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::from([stabilizer.clone()]);
    let mut frontier = vec![stabilizer.clone()];
    while let Some(k) = frontier.pop() {
        for g in 0..elements.len() {
            if k.contains(&g) {
                continue;
            }
            let mut seed = k.clone();
            seed.insert(g);
            let bigger = close(&seed);
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let subgroups: Vec<BTreeSet<usize>> = found.into_iter().collect();
    let partitions: Vec<Partition> = subgroups
        .iter()
        .map(|k| {
            let block: BTreeSet<usize> = k.iter().map(|&i| elements[i].apply(0)).collect();
            let mut labels = vec![usize::MAX; n];
            for g in &elements {
                let translate: Vec<usize> = block.iter().map(|&x| g.apply(x)).collect();
                let name = *translate.iter().min().unwrap();
                for x in translate {
                    labels[x] = name;
                }
            }
            Partition::from_labels(&labels)
        })
        .collect();
    let invariant = invariant_partitions(n, group)?;
    let distinct: BTreeSet<&Partition> = partitions.iter().collect();
    let bijective = distinct.len() == partitions.len()
        && partitions.len() == invariant.len()
        && partitions.iter().all(|p| invariant.contains(p));
    let mut order_preserving = true;
    for (a, ka) in subgroups.iter().enumerate() {
        for (b, kb) in subgroups.iter().enumerate() {
            if ka.is_subset(kb) != partitions[a].refines(&partitions[b]) {
                order_preserving = false;
            }
        }
    }
    Ok(SubgroupCorrespondence {
        group_order: elements.len(),
        stabilizer_order: stabilizer.len(),
        subgroups: subgroups.iter().map(|k| k.len()).zip(partitions).collect(),
        invariant_partitions: invariant.len(),
        bijective,
        order_preserving,
    })
}

/// `|Π_n^P|` for `P ≅ F_p^k` acting freely on `n = m·p^k` points is a
/// bouquet of `(m−1)!·p^{k(m−1)+C(k,2)}` spheres of dimension `m+k−3`.
pub fn predicted_fixed_point_betti(p: u64, k: usize, m: usize, field: Field) -> Result<BettiTable> {
    if !is_prime(p) || k == 0 || m == 0 {
        return Err(Error::arg("need p prime, k >= 1 and m >= 1"));
    }
    let exponent = k * (m - 1) + k * (k - 1) / 2;
    let rank = factorial(m - 1)
        .checked_mul(
            (p as u128)
                .checked_pow(exponent as u32)
                .ok_or_else(|| Error::arg("rank overflows"))?,
        )
        .ok_or_else(|| Error::arg("rank overflows"))?;
    let rank = u64::try_from(rank).map_err(|_| Error::arg("rank overflows"))?;
    Ok(BettiTable::from_pairs(field, &[(m as i64 + k as i64 - 3, rank)]))
}

/// `F_p^k` acting freely on `m` blocks of `p^k` points: point `j·p^k + v`
/// stands for the vector `v` (base-`p` digits) in block `j`, and the `i`-th
/// generator adds the `i`-th unit vector.
pub fn elementary_abelian_free(p: u64, k: usize, m: usize) -> Result<GroupAction> {
    if !is_prime(p) || k == 0 || m == 0 {
        return Err(Error::arg("need p prime, k >= 1 and m >= 1"));
    }
    let p = p as usize;
    let size = p.pow(k as u32);
    let n = m * size;
    let gens = (0..k)
        .map(|i| {
            let step = p.pow(i as u32);
            let image = (0..n)
                .map(|x| {
                    let (block, v) = (x / size, x % size);
                    let digit = (v / step) % p;
                    let w = v - digit * step + ((digit + 1) % p) * step;
                    block * size + w
                })
                .collect();
            Permutation::from_images(image)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupAction::new(n, gens)?.with_label(format!("F{p}^{k} free on {m} orbits")))
}

/// `Σ_{d_1} ≀ … ≀ Σ_{d_l}` on `d = d_1⋯d_l` points, embedded diagonally
/// into `Σ_n` on each of the `n/d` consecutive blocks.
pub fn iterated_wreath(factors: &[usize], n: usize) -> Result<GroupAction> {
    if factors.is_empty() || factors.contains(&0) {
        return Err(Error::arg("wreath factors must be positive"));
    }
    let d: usize = factors.iter().product();
    if !n.is_multiple_of(d) {
        return Err(Error::arg(format!("{d} does not divide {n}")));
    }
    // Generators on d points, as image lists.
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut size = 1;
    for &f in factors {
        let block_gens: Vec<Vec<usize>> = {
            let mut v = Vec::new();
            if f >= 2 {
                v.push(vec_cycle(f, &[0, 1]));
            }
            if f >= 3 {
                v.push(vec_cycle(f, &(0..f).collect::<Vec<_>>()));
            }
            v
        };
        let new_size = size * f;
        let mut next: Vec<Vec<usize>> = gens
            .iter()
            .map(|g| (0..new_size).map(|x| if x < size { g[x] } else { x }).collect())
            .collect();
        for b in block_gens {
            next.push((0..new_size).map(|x| b[x / size] * size + x % size).collect());
        }
        gens = next;
        size = new_size;
    }
    let diagonal = gens
        .into_iter()
        .map(|g| Permutation::from_images((0..n).map(|x| (x / d) * d + g[x % d]).collect()))
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = factors.iter().map(|f| format!("S{f}")).collect();
    Ok(GroupAction::new(n, diagonal)?.with_label(names.join(" wr ")))
}

fn vec_cycle(f: usize, cycle: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = (0..f).collect();
    for w in 0..cycle.len() {
        v[cycle[w]] = cycle[(w + 1) % cycle.len()];
    }
    v
}

/// One cyclic subgroup of `Σ_n` per cycle type: the group generated by the
/// permutation with consecutive cycles of the given lengths.
pub fn cyclic_subgroup(cycle_type: &[usize]) -> Result<GroupAction> {
    let n: usize = cycle_type.iter().sum();
    let mut cycles = Vec::new();
    let mut start = 0;
    for &c in cycle_type {
        if c == 0 {
            return Err(Error::arg("cycle lengths must be positive"));
        }
        if c > 1 {
            cycles.push((start..start + c).collect());
        }
        start += c;
    }
    let g = Permutation::from_cycles(n, &cycles)?;
    let label = format!("<{g}>");
    Ok(GroupAction::new(n, vec![g])?.with_label(label))
}

/// The rank-level form of the isotypical splitting: the Betti numbers of
/// `|Π_n^G|` against `|x^⊥|` copies of `(|Π_d^G|)^◇ ∧ |Π_m|^◇`, with the
/// two factors computed from the relabeled group on one block and from
/// `Π_m` directly.
#[derive(Clone, Debug, Serialize)]
pub struct IsotypicalSplitting {
    pub d: usize,
    pub m: usize,
    pub complements: usize,
    pub block_factor: BettiTable,
    pub orbit_factor: BettiTable,
    pub predicted: BettiTable,
    pub computed: BettiTable,
    pub holds: bool,
}

pub fn isotypical_splitting(n: usize, group: &GroupAction, field: Field) -> Result<IsotypicalSplitting> {
    let c = classify_action(n, group)?;
    let (d, m) = match c.kind {
        ActionKind::Isotypical { d, m } if d >= 2 => (d, m),
        _ => {
            return Err(Error::Precondition(
                "the splitting needs a nontrivial isotypical action with several orbits".into(),
            ))
        }
    };
    let pi = c.relabeling.clone().unwrap();
    let inv = pi.inverse();
    let block_gens = group
        .generators
        .iter()
        .map(|g| {
            let h = pi.compose(g).compose(&inv);
            Permutation::from_images((0..d).map(|k| h.apply(k)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let block_group = GroupAction::new(d, block_gens)?;
    let block_factor = fixed_point_betti(d, &block_group, field)?;
    let orbit_factor = lattice_betti(FiniteLattice::partition_lattice(m)?, field)?;
    let mut predicted = BettiTable::new(field);
    // Reduced series of X^◇ ∧ Y^◇ is t·P_X · t·P_Y.
    for (&a, &ra) in block_factor.ranks() {
        for (&b, &rb) in orbit_factor.ranks() {
            predicted.add(a + b + 2, ra * rb * c.complements as u64);
        }
    }
    let computed = fixed_point_betti(n, group, field)?;
    Ok(IsotypicalSplitting {
        d,
        m,
        complements: c.complements,
        holds: predicted.betti == computed.betti,
        block_factor,
        orbit_factor,
        predicted,
        computed,
    })
}

#[cfg(test)]
mod tests;
