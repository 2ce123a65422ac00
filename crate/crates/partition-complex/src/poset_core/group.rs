use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use super::Permutation;
use crate::error::{Error, Result};

/// Default bound on the number of group elements enumerated by closure.
pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

/// A permutation group on `{0..degree-1}` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub label: Option<String>,
}

impl GroupAction {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::arg(format!(
                "generator {g} has degree {}, expected {degree}",
                g.degree()
            )));
        }
        Ok(GroupAction {
            degree,
            generators,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Parses generators written in 1-based cycle notation.
    pub fn parse(degree: usize, generators: &[&str]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|s| Permutation::parse(degree, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        GroupAction {
            degree,
            generators: Vec::new(),
            label: Some("trivial".into()),
        }
    }

    pub fn symmetric(n: usize) -> Self {
        let mut g = Self::young(&[n]);
        g.label = Some(format!("S{n}"));
        g
    }

    /// The Young subgroup `Σ_{n_1} × … × Σ_{n_k}` preserving the consecutive
    /// blocks `{0..n_1-1}`, `{n_1..n_1+n_2-1}`, and so on.
    pub fn young(composition: &[usize]) -> Self {
        let n: usize = composition.iter().sum();
        let mut gens = Vec::new();
        let mut start = 0;
        for &m in composition {
            if m >= 2 {
                gens.push(Permutation::from_cycles(n, &[vec![start, start + 1]]).unwrap());
            }
            if m >= 3 {
                gens.push(Permutation::from_cycles(n, &[(start..start + m).collect()]).unwrap());
            }
            start += m;
        }
        let parts: Vec<String> = composition.iter().map(|m| m.to_string()).collect();
        GroupAction {
            degree: n,
            generators: gens,
            label: Some(format!("Young({})", parts.join(","))),
        }
    }

    /// All group elements, sorted, with the identity first.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        self.elements_bounded(DEFAULT_GROUP_BOUND)
    }

    pub fn elements_bounded(&self, bound: usize) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for s in &self.generators {
                let next = s.compose(&e);
                if seen.insert(next.clone()) {
                    if seen.len() > bound {
                        return Err(Error::resource("group closure", seen.len() as u128, bound as u128));
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut all: Vec<Permutation> = seen.into_iter().collect();
        all.sort();
        Ok(all)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }
}

/// One orbit of a group acting on a list of items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Index of the smallest item of the orbit.
    pub representative: usize,
    /// Indices of all items in the orbit, sorted.
    pub members: Vec<usize>,
    /// Schreier generators of the stabilizer of the representative.
    pub stabilizer: Vec<Permutation>,
}

/// Splits `items` into orbits under the group generated by `action`.
///
/// Orbits are returned sorted by their representative, which is the
/// smallest item of the orbit under `Ord`. The stabilizer generators come
/// from the transversal built during the breadth-first orbit search.
pub fn orbits<T, F>(action: &GroupAction, items: &[T], act: F) -> Result<Vec<Orbit>>
where
    T: Clone + Eq + Hash + Ord + std::fmt::Debug,
    F: Fn(&Permutation, &T) -> T,
{
    let index: HashMap<&T, usize> = items.iter().enumerate().map(|(i, t)| (t, i)).collect();
    if index.len() != items.len() {
        return Err(Error::arg("orbit items contain duplicates"));
    }
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[a].cmp(&items[b]));
    let mut transversal: Vec<Option<Permutation>> = vec![None; items.len()];
    let mut out = Vec::new();
    for &start in &order {
        if transversal[start].is_some() {
            continue;
        }
        transversal[start] = Some(Permutation::identity(action.degree));
        let mut members = vec![start];
        let mut stab: Vec<Permutation> = Vec::new();
        let mut stab_seen: HashSet<Permutation> = HashSet::new();
        let mut head = 0;
        while head < members.len() {
            let m = members[head];
            head += 1;
            let tm = transversal[m].clone().unwrap();
            for s in &action.generators {
                let image = act(s, &items[m]);
                let Some(&j) = index.get(&image) else {
                    return Err(Error::invariant(format!(
                        "action not closed on items: {s} maps {:?} to {:?}",
                        items[m], image
                    )));
                };
                let st = s.compose(&tm);
                match &transversal[j] {
                    None => {
                        transversal[j] = Some(st);
                        members.push(j);
                    }
                    Some(tj) => {
                        let schreier = tj.inverse().compose(&st);
                        if !schreier.is_identity() && stab_seen.insert(schreier.clone()) {
                            stab.push(schreier);
                        }
                    }
                }
            }
        }
        members.sort_unstable();
        stab.sort();
        out.push(Orbit {
            representative: start,
            members,
            stabilizer: stab,
        });
    }
    Ok(out)
}
