//! Orthogonality fans and the four built-in families.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::poset_core::{FiniteLattice, GroupAction, Partition, Permutation};

/// A function from nonempty chains of the lattice to lattice elements.
/// Chains are passed as increasing lists of element indices.
pub type ChainFunction = Arc<dyn Fn(&FiniteLattice, &[usize]) -> usize + Send + Sync>;

/// One restriction applied on top of a fan function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Step {
    /// `G^{≤y}(σ) = G(σ) ∧ y`.
    Below(usize),
    /// `G^{≥y}(σ) = G([b < σ]) ∨ y`, where `b` is the bottom of the interval
    /// on which `G` lives.
    Above { y: usize, bottom: usize },
}

/// A base function of the fan with a stack of restrictions, innermost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Restricted {
    pub base: usize,
    pub steps: Vec<Step>,
}

impl Restricted {
    fn with(&self, step: Step) -> Restricted {
        let mut steps = self.steps.clone();
        steps.push(step);
        Restricted { base: self.base, steps }
    }
}

/// A fan restricted to an interval `[lo, hi]` of the lattice.
#[derive(Clone, Debug)]
pub(crate) struct View {
    pub funcs: Vec<Restricted>,
    pub lo: usize,
    pub hi: usize,
}

impl View {
    /// `(F_2^{≤y}, …, F_r^{≤y})` on `[lo, y]`.
    pub fn left(&self, y: usize) -> View {
        View {
            funcs: self.funcs[1..].iter().map(|f| f.with(Step::Below(y))).collect(),
            lo: self.lo,
            hi: y,
        }
    }

    /// `(F_1^{≥y}, …, F_r^{≥y})` on `[y, hi]`.
    pub fn right(&self, y: usize) -> View {
        View {
            funcs: self
                .funcs
                .iter()
                .map(|f| f.with(Step::Above { y, bottom: self.lo }))
                .collect(),
            lo: y,
            hi: self.hi,
        }
    }
}

/// An ordered list `(F_1, …, F_r)` of functions on the chains of a finite
/// lattice, together with the group it is meant to commute with.
///
/// Values of the base functions are memoized by chain.
pub struct Fan<'a> {
    pub name: String,
    pub lattice: &'a FiniteLattice,
    pub group: GroupAction,
    functions: Vec<ChainFunction>,
    memo: Mutex<HashMap<(usize, Vec<usize>), usize>>,
}

impl<'a> Fan<'a> {
    pub fn new(
        name: impl Into<String>,
        lattice: &'a FiniteLattice,
        group: GroupAction,
        functions: Vec<ChainFunction>,
    ) -> Self {
        Fan {
            name: name.into(),
            lattice,
            group,
            functions,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// `F_{i+1}(σ)` for a nonempty increasing chain `σ`.
    pub fn value(&self, i: usize, chain: &[usize]) -> usize {
        let key = (i, chain.to_vec());
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return v;
        }
        let v = (self.functions[i])(self.lattice, chain);
        self.memo.lock().unwrap().insert(key, v);
        v
    }

    /// `F_1([0̂])`.
    pub fn first_value(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.value(0, &[self.lattice.bottom()]))
    }

    pub(crate) fn root_view(&self) -> View {
        View {
            funcs: (0..self.len())
                .map(|base| Restricted {
                    base,
                    steps: Vec::new(),
                })
                .collect(),
            lo: self.lattice.bottom(),
            hi: self.lattice.top(),
        }
    }

    pub(crate) fn eval(&self, f: &Restricted, chain: &[usize]) -> usize {
        self.eval_steps(f.base, &f.steps, chain)
    }

    fn eval_steps(&self, base: usize, steps: &[Step], chain: &[usize]) -> usize {
        match steps.split_last() {
            None => self.value(base, chain),
            Some((Step::Below(y), rest)) => self.lattice.meet(self.eval_steps(base, rest, chain), *y),
            Some((Step::Above { y, bottom }, rest)) => {
                let mut extended = Vec::with_capacity(chain.len() + 1);
                extended.push(*bottom);
                extended.extend_from_slice(chain);
                self.lattice.join(self.eval_steps(base, rest, &extended), *y)
            }
        }
    }

    /// Elements of `[σ < hi] = σ ∪ {hi}` orthogonal to `x` inside
    /// `[lo, hi]`, as positions into `σ` (with `σ.len()` standing for `hi`).
    ///
    /// Orthogonality is the lattice condition `y ∧ x = lo`, `y ∨ x = hi`, so
    /// `hi` itself qualifies exactly when `x = lo`.
    pub(crate) fn perp_positions(&self, x: usize, lo: usize, hi: usize, sigma: &[usize]) -> Vec<usize> {
        let l = self.lattice;
        sigma
            .iter()
            .chain(std::iter::once(&hi))
            .enumerate()
            .filter(|&(_, &y)| l.meet(y, x) == lo && l.join(y, x) == hi)
            .map(|(i, _)| i)
            .collect()
    }
}

impl std::fmt::Debug for Fan<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fan")
            .field("name", &self.name)
            .field("functions", &self.functions.len())
            .field("group", &self.group.label)
            .finish()
    }
}

fn partitions_of(l: &FiniteLattice) -> Result<&[Partition]> {
    l.partitions()
        .ok_or_else(|| Error::arg("this fan needs a lattice of set partitions"))
}

/// The words attached to the blocks of the top partition of `chain`, in
/// block order. A point of the `i`-th composition block starts as `c_i`;
/// each block of a later partition gets the product of the words of its
/// sub-blocks in ascending lexicographic order.
pub fn attached_words(l: &FiniteLattice, colour: &[u8], chain: &[usize]) -> Vec<Vec<u8>> {
    let parts = l.partitions().expect("partition lattice");
    let mut words: Vec<Vec<u8>> = colour.iter().map(|&c| vec![c]).collect();
    let mut owner: Vec<usize> = (0..colour.len()).collect();
    for &x in chain {
        let p = &parts[x];
        let mut grouped: Vec<Vec<Vec<u8>>> = vec![Vec::new(); p.num_blocks()];
        let mut seen = vec![false; words.len()];
        for (s, &b) in p.labels().iter().enumerate() {
            if !seen[owner[s]] {
                seen[owner[s]] = true;
                grouped[b as usize].push(std::mem::take(&mut words[owner[s]]));
            }
        }
        words = grouped
            .into_iter()
            .map(|mut ws| {
                ws.sort();
                ws.concat()
            })
            .collect();
        owner = p.labels().iter().map(|&b| b as usize).collect();
    }
    words
}

fn colouring(composition: &[usize]) -> Vec<u8> {
    composition
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i as u8 + 1, m))
        .collect()
}

/// Merges the blocks of the top partition whose word is (`minimal`) or is
/// not (`!minimal`) the smallest attached word.
fn young_function(colour: Vec<u8>, merge_minimal: bool) -> ChainFunction {
    Arc::new(move |l: &FiniteLattice, chain: &[usize]| {
        let words = attached_words(l, &colour, chain);
        let min = words.iter().min().unwrap();
        let which: Vec<usize> = (0..words.len())
            .filter(|&b| (words[b] == *min) == merge_minimal)
            .collect();
        let top = &l.partitions().unwrap()[*chain.last().unwrap()];
        l.index_of(&top.merge_blocks(&which)).unwrap()
    })
}

/// The Young fan `(F_1, F_2)` on the partition lattice of `{0..n-1}` for
/// the composition `(n_1, …, n_k)` whose blocks are consecutive.
///
/// With `A` the blocks of the top partition of `σ` carrying the smallest
/// attached word and `B` the others, `F_1(σ)` merges the blocks of `B` and
/// `F_2(σ)` merges the blocks of `A`.
pub fn young_fan<'a>(l: &'a FiniteLattice, composition: &[usize]) -> Result<Fan<'a>> {
    let parts = partitions_of(l)?;
    let n: usize = composition.iter().sum();
    if parts[0].n() != n || composition.contains(&0) {
        return Err(Error::arg(format!(
            "composition {composition:?} does not split the {} points of the lattice",
            parts[0].n()
        )));
    }
    let colour = colouring(composition);
    let parts_text: Vec<String> = composition.iter().map(|m| m.to_string()).collect();
    Ok(Fan::new(
        format!("young({})", parts_text.join(",")),
        l,
        GroupAction::young(composition),
        vec![young_function(colour.clone(), false), young_function(colour, true)],
    ))
}

fn point_function(x: usize) -> ChainFunction {
    Arc::new(
        move |l: &FiniteLattice, chain: &[usize]| {
            if chain == [l.bottom()] {
                x
            } else {
                l.top()
            }
        },
    )
}

fn check_stable(l: &FiniteLattice, group: &GroupAction, x: usize) -> Result<()> {
    for g in &group.generators {
        if l.act_element(g, x) != Some(x) {
            return Err(Error::arg(format!("{} is not fixed by the generator {g}", l.label(x))));
        }
    }
    Ok(())
}

/// The single function with `F([0̂]) = x` and `F(σ) = 1̂` otherwise.
pub fn point_fan<'a>(l: &'a FiniteLattice, group: GroupAction, x: usize) -> Result<Fan<'a>> {
    if x >= l.len() {
        return Err(Error::arg(format!("element {x} is outside the lattice")));
    }
    check_stable(l, &group, x)?;
    Ok(Fan::new(
        format!("point({})", l.label(x)),
        l,
        group,
        vec![point_function(x)],
    ))
}

/// The symmetry-breaking fan on the partition lattice of
/// `A ⊔ B_1 ⊔ … ⊔ B_k`, where `A` is the first `a` points and the `B_i`
/// follow in order with the given sizes.
///
/// `F′_1([0̂])` is the partition with all of `B` in one block and the points
/// of `A` alone, `F′_1(σ) = 1̂` otherwise, and `F′_2` is the Young `F_2` for
/// the order `A < B_1 < … < B_k`.
pub fn symmetry_breaking_fan<'a>(l: &'a FiniteLattice, a: usize, b_parts: &[usize]) -> Result<Fan<'a>> {
    let parts = partitions_of(l)?;
    let b: usize = b_parts.iter().sum();
    let n = a + b;
    if parts[0].n() != n || a == 0 || b == 0 || b_parts.contains(&0) {
        return Err(Error::arg(format!(
            "A of size {a} and B parts {b_parts:?} do not split the {} points of the lattice",
            parts[0].n()
        )));
    }
    let labels: Vec<usize> = (0..n).map(|s| if s < a { s } else { a }).collect();
    let x = l.index_of(&Partition::from_labels(&labels)).unwrap();
    let mut composition = vec![a];
    composition.extend_from_slice(b_parts);
    let b_text: Vec<String> = b_parts.iter().map(|m| m.to_string()).collect();
    Ok(Fan::new(
        format!("symmetry-breaking({a};{})", b_text.join(",")),
        l,
        GroupAction::young(&composition),
        vec![point_function(x), young_function(colouring(&composition), true)],
    ))
}

/// The parabolic fan `F([B_0 < … < B_i]) = A_{r−i} ∨ B_i` for a flag
/// `A_0 < … < A_r` of proper nonzero elements, with `A_j = 1̂` for `j < 0`.
///
/// `elements` lists the whole ambient group; the fan's group is the
/// stabilizer of the flag, stored by a small generating set.
pub fn parabolic_fan<'a>(l: &'a FiniteLattice, elements: &[Permutation], flag: &[usize]) -> Result<Fan<'a>> {
    if flag.is_empty() {
        return Err(Error::arg("the flag must have at least one member"));
    }
    if flag.iter().any(|&a| a >= l.len() || a == l.bottom() || a == l.top()) {
        return Err(Error::arg("flag members must be proper elements of the lattice"));
    }
    if flag.windows(2).any(|w| !l.lt(w[0], w[1])) {
        return Err(Error::arg("flag members must be strictly increasing"));
    }
    let stabilizer: Vec<Permutation> = elements
        .iter()
        .filter(|g| flag.iter().all(|&a| l.act_element(g, a) == Some(a)))
        .cloned()
        .collect();
    let degree = elements.first().map(Permutation::degree).unwrap_or(0);
    let parabolic = GroupAction::new(degree, generating_subset(&stabilizer))?.with_label("parabolic");
    let flag_owned = flag.to_vec();
    let f: ChainFunction = Arc::new(move |l: &FiniteLattice, chain: &[usize]| {
        let r = flag_owned.len() - 1;
        let i = chain.len() - 1;
        let a = if i <= r { flag_owned[r - i] } else { l.top() };
        l.join(a, chain[i])
    });
    let names: Vec<String> = flag.iter().map(|&a| l.label(a)).collect();
    Ok(Fan::new(
        format!("parabolic({})", names.join(" < ")),
        l,
        parabolic,
        vec![f],
    ))
}

/// A subset of `elements` generating the same group, chosen greedily.
fn generating_subset(elements: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut closure: HashSet<Permutation> = HashSet::new();
    for g in elements {
        if g.is_identity() || closure.contains(g) {
            continue;
        }
        gens.push(g.clone());
        closure = HashSet::from([Permutation::identity(g.degree())]);
        let mut queue: Vec<Permutation> = closure.iter().cloned().collect();
        while let Some(e) = queue.pop() {
            for s in &gens {
                let next = s.compose(&e);
                if closure.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
    }
    gens
}
