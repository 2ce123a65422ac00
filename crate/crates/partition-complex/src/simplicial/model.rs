use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::poset_core::{FiniteLattice, GroupAction, Permutation};

/// Which endpoints of a lattice a nerve keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NerveEnds {
    /// Chains avoid both 0̂ and 1̂: the order complex of the proper part.
    Open,
    /// Chains may use every element of the lattice.
    Closed,
    /// Chains may contain 0̂ but not 1̂.
    KeepBottom,
    /// Chains may contain 1̂ but not 0̂.
    KeepTop,
}

/// A bounded poset factor of a model, together with the lattice it was cut
/// from. `source_index[i]` is the lattice element behind local element `i`,
/// or `None` for an added formal endpoint.
#[derive(Clone, Debug)]
pub struct OrderComponent {
    pub(crate) lattice: Arc<FiniteLattice>,
    pub(crate) source_index: Vec<Option<usize>>,
    pub(crate) up: Vec<FixedBitSet>,
    pub(crate) bottom: usize,
    pub(crate) top: usize,
}

impl OrderComponent {
    /// The lattice itself, with its own 0̂ and 1̂ as the required endpoints.
    pub fn lattice(l: Arc<FiniteLattice>) -> Self {
        let up = (0..l.len()).map(|x| l.up_set(x).clone()).collect();
        OrderComponent {
            source_index: (0..l.len()).map(Some).collect(),
            bottom: l.bottom(),
            top: l.top(),
            up,
            lattice: l,
        }
    }

    /// The chosen elements of `l` with a formal least and greatest element
    /// added; chains through the formal ends model the plain nerve of the
    /// chosen elements.
    pub fn with_formal_ends(l: Arc<FiniteLattice>, keep: &[usize]) -> Self {
        let k = keep.len();
        let size = k + 2;
        let mut source_index = vec![None];
        source_index.extend(keep.iter().map(|&x| Some(x)));
        source_index.push(None);
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        up[0].insert_range(..);
        up[size - 1].insert(size - 1);
        for (i, &a) in keep.iter().enumerate() {
            up[i + 1].insert(size - 1);
            for (j, &b) in keep.iter().enumerate() {
                if l.leq(a, b) {
                    up[i + 1].insert(j + 1);
                }
            }
        }
        OrderComponent {
            lattice: l,
            source_index,
            up,
            bottom: 0,
            top: size - 1,
        }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub(crate) fn height(&self) -> usize {
        // Longest chain from bottom to top, by dynamic programming over a
        // linear extension (up-set sizes decrease along any chain).
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.up[x].count_ones(..)));
        let mut h = vec![0usize; n];
        for &x in &order {
            for y in self.up[x].ones() {
                if y != x {
                    h[y] = h[y].max(h[x] + 1);
                }
            }
        }
        h[self.top]
    }

    /// Local element tables of the given group elements.
    pub(crate) fn tables(&self, group: &[Permutation]) -> Result<Vec<Vec<u32>>> {
        let lat = self.lattice.action_tables(group)?;
        let mut back = vec![u32::MAX; self.lattice.len()];
        for (i, s) in self.source_index.iter().enumerate() {
            if let Some(x) = s {
                back[*x] = i as u32;
            }
        }
        lat.iter()
            .map(|t| {
                self.source_index
                    .iter()
                    .enumerate()
                    .map(|(i, s)| match s {
                        None => Ok(i as u32),
                        Some(x) => {
                            let y = back[t[*x] as usize];
                            if y == u32::MAX {
                                Err(Error::invariant("group does not preserve the kept elements of a nerve"))
                            } else {
                                Ok(y)
                            }
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn label(&self, i: usize) -> String {
        match self.source_index[i] {
            Some(x) => self.lattice.label(x),
            None if i == self.bottom => "⊥".into(),
            None => "⊤".into(),
        }
    }
}

/// How the group moves a linear coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinearRole {
    /// The coordinate is the `i`-th of the points permuted by the group;
    /// `g` sends it to coordinate `g(i)`.
    Permuted(usize),
    /// The group fixes the coordinate (suspension coordinates).
    Fixed,
}

/// A poset-product nerve with a face-closed collapsed subcomplex and a group
/// action.
///
/// The base poset is a product of bounded posets (lattices, possibly with
/// formal ends) and linear posets `[ℓ] = {0 < … < ℓ}`. A strict chain is
/// *not* collapsed exactly when every order coordinate attains both its
/// bottom and its top, and every linear coordinate attains each value
/// `0..=ℓ`. Linear factors therefore model `Δ^ℓ/∂Δ^ℓ = S^ℓ`, and an order
/// factor `P` models the double suspension of the nerve of its proper part.
#[derive(Clone, Debug)]
pub struct CollapsedNerveModel {
    pub name: String,
    pub(crate) orders: Vec<OrderComponent>,
    pub(crate) linear: Vec<(usize, LinearRole)>,
    pub(crate) group: Vec<Permutation>,
    pub(crate) generators: Vec<Permutation>,
    pub(crate) group_label: String,
    pub(crate) group_degree: usize,
    /// Highest reported degree to enumerate.
    pub(crate) degree_cap: Option<i64>,
    /// Reported degree = internal simplicial degree + shift.
    pub degree_shift: i64,
    /// Whether the model is the augmented nerve of a poset, in which case the
    /// reported degree −1 holds the empty chain.
    pub(crate) is_nerve: bool,
}

impl CollapsedNerveModel {
    fn bare(name: String, orders: Vec<OrderComponent>, linear: Vec<(usize, LinearRole)>, shift: i64) -> Self {
        CollapsedNerveModel {
            name,
            orders,
            linear,
            group: vec![Permutation::identity(0)],
            generators: Vec::new(),
            group_label: "trivial".into(),
            group_degree: 0,
            degree_cap: None,
            degree_shift: shift,
            is_nerve: false,
        }
    }

    /// Order complex of a lattice (or part of it, per `ends`), with trivial
    /// group. Homology is reported with the augmented (reduced) convention.
    pub fn nerve(l: Arc<FiniteLattice>, ends: NerveEnds) -> Self {
        let name = format!("nerve({:?}, {} elements)", ends, l.len());
        let comp = match ends {
            NerveEnds::Open => OrderComponent::lattice(l),
            _ => {
                let keep: Vec<usize> = (0..l.len())
                    .filter(|&x| {
                        (x != l.bottom() || matches!(ends, NerveEnds::Closed | NerveEnds::KeepBottom))
                            && (x != l.top() || matches!(ends, NerveEnds::Closed | NerveEnds::KeepTop))
                    })
                    .collect();
                OrderComponent::with_formal_ends(l, &keep)
            }
        };
        let mut m = Self::bare(name, vec![comp], Vec::new(), -2);
        m.is_nerve = true;
        m
    }

    /// Model of `Σ|Π_n|^◇ ∧ (S^ℓ)^{∧n}` with its `Σ_n`-action.
    ///
    /// For `n = 1` the lattice factor is a single point and the model is
    /// `S^ℓ`, following the convention `X^◇ ∧ |Π_1|^◇ = X`.
    pub fn atom(n: usize, ell: usize) -> Result<Self> {
        if n == 0 || ell == 0 {
            return Err(Error::arg("atom model needs n >= 1 and l >= 1"));
        }
        let l = Arc::new(FiniteLattice::partition_lattice(n)?);
        let linear = (0..n).map(|i| (ell, LinearRole::Permuted(i))).collect();
        let m = Self::bare(
            format!("atom(n={n}, l={ell})"),
            vec![OrderComponent::lattice(l)],
            linear,
            0,
        );
        m.with_group(&GroupAction::symmetric(n))
    }

    /// Model of `(S^ℓ)^{∧n}` with `Σ_n` permuting the factors.
    pub fn sym_smash(n: usize, ell: usize) -> Result<Self> {
        if n == 0 || ell == 0 {
            return Err(Error::arg("smash power needs n >= 1 and l >= 1"));
        }
        let linear = (0..n).map(|i| (ell, LinearRole::Permuted(i))).collect();
        let m = Self::bare(format!("smash(n={n}, l={ell})"), Vec::new(), linear, 0);
        m.with_group(&GroupAction::symmetric(n))
    }

    /// `S^{ℓ_1} ∧ … ∧ S^{ℓ_k}` with trivial group.
    pub fn sphere_smash(dims: &[usize]) -> Self {
        let linear = dims.iter().map(|&l| (l, LinearRole::Fixed)).collect();
        Self::bare(format!("spheres{dims:?}"), Vec::new(), linear, 0)
    }

    /// `k`-fold suspension: smash with `S^1` factors fixed by the group.
    pub fn suspend(mut self, k: usize) -> Self {
        for _ in 0..k {
            self.linear.push((1, LinearRole::Fixed));
        }
        self.name = format!("susp^{k}({})", self.name);
        self
    }

    /// Installs a group action; `group` acts on lattice factors through
    /// their elements and on permuted linear coordinates by index.
    pub fn with_group(mut self, group: &GroupAction) -> Result<Self> {
        let elems = group.elements()?;
        let n = group.degree;
        let permuted: Vec<usize> = self
            .linear
            .iter()
            .filter_map(|(_, r)| match r {
                LinearRole::Permuted(i) => Some(*i),
                LinearRole::Fixed => None,
            })
            .collect();
        for &i in &permuted {
            if i >= n {
                return Err(Error::arg(format!(
                    "linear coordinate index {i} exceeds group degree {n}"
                )));
            }
        }
        for g in &elems {
            for &i in &permuted {
                if !permuted.contains(&g.apply(i)) {
                    return Err(Error::arg(format!("{g} moves a linear coordinate outside the model")));
                }
            }
            for (ell, role) in &self.linear {
                if let LinearRole::Permuted(i) = role {
                    let j = g.apply(*i);
                    let same = self
                        .linear
                        .iter()
                        .any(|(l, r)| *r == LinearRole::Permuted(j) && l == ell);
                    if !same {
                        return Err(Error::arg("group mixes linear factors of different lengths"));
                    }
                }
            }
        }
        for o in &self.orders {
            o.tables(&elems)?;
        }
        self.group = elems;
        self.generators = group.generators.clone();
        self.group_label = group.label.clone().unwrap_or_else(|| {
            let g: Vec<String> = group.generators.iter().map(|g| g.to_string()).collect();
            format!("<{}>", g.join(","))
        });
        self.group_degree = n;
        Ok(self)
    }

    /// Limits enumeration to reported degree `cap`; Betti numbers from that
    /// degree on are flagged as truncated.
    pub fn with_degree_cap(mut self, cap: i64) -> Self {
        self.degree_cap = Some(cap);
        self
    }

    /// Length of the longest strict chain of the product poset, which is
    /// the top simplicial degree.
    pub fn height(&self) -> usize {
        self.orders.iter().map(OrderComponent::height).sum::<usize>()
            + self.linear.iter().map(|(l, _)| *l).sum::<usize>()
    }

    pub fn group_order(&self) -> usize {
        self.group.len()
    }

    pub fn group_label(&self) -> &str {
        &self.group_label
    }

    pub fn is_nerve(&self) -> bool {
        self.is_nerve
    }

    /// Stable description of everything that determines the chain complex.
    pub fn parameters(&self) -> String {
        let orders: Vec<String> = self
            .orders
            .iter()
            .map(|o| {
                let labels: Vec<String> = (0..o.len()).map(|i| o.label(i)).collect();
                format!("[{}]", labels.join(" "))
            })
            .collect();
        let mut gens: Vec<String> = self.generators.iter().map(|g| format!("{:?}", g.images())).collect();
        gens.sort();
        format!(
            "orders={};linear={:?};group_degree={};group={};order={};cap={:?};shift={}",
            orders.join(","),
            self.linear,
            self.group_degree,
            gens.join(","),
            self.group.len(),
            self.degree_cap,
            self.degree_shift
        )
    }
}
