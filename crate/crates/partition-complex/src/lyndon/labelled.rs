//! Labelled weak Lyndon words and the chain of partitions attached to them.

use serde::Serialize;

use super::{factorial, gcd_all, lyndon_words, reduce_pairs, witt_count, Letter, Word};
use crate::error::{Error, Result};
use crate::poset_core::{Partition, Permutation};

/// Largest number of labelled words materialized by
/// [`labelled_weak_lyndon_words`].
pub const LABELLED_WORD_BOUND: u128 = 2_000_000;

/// A weak Lyndon word `u^d` in simple letters together with a labelling of
/// its positions by the points `0..n`.
///
/// Position `j` carrying `c_i` is labelled by a point of the `i`-th block of
/// the composition. Labellings that differ by a permutation of the `d`
/// copies of `u` are identified; the stored one has its copies in
/// increasing lexicographic order of their label sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct LabelledWord {
    pub word: Word,
    pub labels: Vec<usize>,
    pub period: usize,
}

impl LabelledWord {
    pub fn new(word: Word, labels: Vec<usize>, composition: &[usize]) -> Result<Self> {
        let n: usize = composition.iter().sum();
        if labels.len() != word.len() || word.len() != n {
            return Err(Error::arg(format!(
                "a labelling of {} needs {n} labels, got {}",
                word,
                labels.len()
            )));
        }
        if !word.is_weak_lyndon() || word.letters().iter().any(|l| l.len() != 1) {
            return Err(Error::arg(format!(
                "{word} is not a weak Lyndon word in simple letters"
            )));
        }
        if word.content(composition.len()) != composition {
            return Err(Error::arg(format!("{word} does not have content {composition:?}")));
        }
        let block = block_of(composition);
        let mut seen = vec![false; n];
        for (letter, &s) in word.letters().iter().zip(&labels) {
            if s >= n || seen[s] || block[s] + 1 != letter[0] as usize {
                return Err(Error::arg(format!(
                    "labels {labels:?} do not fit {word} and {composition:?}"
                )));
            }
            seen[s] = true;
        }
        let (_, period) = word.root();
        Ok(Self::canonical(word, labels, period))
    }

    fn canonical(word: Word, mut labels: Vec<usize>, period: usize) -> Self {
        let len = labels.len() / period;
        let mut copies: Vec<Vec<usize>> = labels.chunks(len).map(<[usize]>::to_vec).collect();
        copies.sort();
        labels = copies.concat();
        LabelledWord { word, labels, period }
    }

    /// The labelling obtained by applying `g` to every label. The
    /// permutation must preserve the blocks of the composition.
    pub fn act(&self, g: &Permutation) -> LabelledWord {
        let labels = self.labels.iter().map(|&s| g.apply(s)).collect();
        Self::canonical(self.word.clone(), labels, self.period)
    }

    /// Label sequences of the `d` copies of the Lyndon root.
    pub fn copies(&self) -> impl Iterator<Item = &[usize]> {
        self.labels.chunks(self.labels.len() / self.period)
    }
}

fn block_of(composition: &[usize]) -> Vec<usize> {
    composition
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i, m))
        .collect()
}

fn block_starts(composition: &[usize]) -> Vec<usize> {
    composition
        .iter()
        .scan(0, |acc, &m| {
            let s = *acc;
            *acc += m;
            Some(s)
        })
        .collect()
}

/// The standard labelling: the occurrences of `c_i` are labelled by the
/// points of the `i`-th block in increasing order from left to right.
pub fn standard_labelling(word: &Word, composition: &[usize]) -> Result<LabelledWord> {
    let mut next = block_starts(composition);
    let mut labels = Vec::with_capacity(word.len());
    for letter in word.letters() {
        let i = letter.first().map(|&c| c as usize).unwrap_or(0);
        if i == 0 || i > composition.len() {
            return Err(Error::arg(format!(
                "letter c{i} is outside the composition {composition:?}"
            )));
        }
        labels.push(next[i - 1]);
        next[i - 1] += 1;
    }
    LabelledWord::new(word.clone(), labels, composition)
}

/// Expected number of labelled weak Lyndon words of content `composition`:
/// `Σ_{d | gcd} |B(n_i/d)| · n_1!…n_k!/d!`.
fn labelled_count(composition: &[usize]) -> u128 {
    let g = gcd_all(composition);
    let index: u128 = composition.iter().map(|&m| factorial(m)).product();
    (1..=g)
        .filter(|d| g.is_multiple_of(*d))
        .map(|d| {
            let reduced: Vec<usize> = composition.iter().map(|m| m / d).collect();
            witt_count(&reduced) * index / factorial(d)
        })
        .sum()
}

/// All labelled weak Lyndon words of content `composition`, sorted.
pub fn labelled_weak_lyndon_words(composition: &[usize]) -> Result<Vec<LabelledWord>> {
    let n: usize = composition.iter().sum();
    if n == 0 {
        return Err(Error::arg("composition must have positive total"));
    }
    let estimate = labelled_count(composition);
    if estimate > LABELLED_WORD_BOUND {
        return Err(Error::resource(
            "labelled weak Lyndon words",
            estimate,
            LABELLED_WORD_BOUND,
        ));
    }
    let starts = block_starts(composition);
    let g = gcd_all(composition);
    let mut out = Vec::new();
    for d in (1..=g).filter(|d| g.is_multiple_of(*d)) {
        let reduced: Vec<usize> = composition.iter().map(|m| m / d).collect();
        for root in lyndon_words(&reduced) {
            let letters: Vec<Letter> = root.letters().iter().cycle().take(n).cloned().collect();
            let word = Word { letters };
            let positions: Vec<Vec<usize>> = (0..composition.len())
                .map(|i| (0..n).filter(|&j| word.letters()[j][0] as usize == i + 1).collect())
                .collect();
            let mut labels = vec![0; n];
            assign(0, composition, &starts, &positions, &mut labels, &mut |labels| {
                let len = n / d;
                let increasing = labels.chunks(len).collect::<Vec<_>>().windows(2).all(|w| w[0] < w[1]);
                if increasing {
                    out.push(LabelledWord {
                        word: word.clone(),
                        labels: labels.to_vec(),
                        period: d,
                    });
                }
            });
        }
    }
    out.sort();
    if out.len() as u128 != estimate {
        return Err(Error::invariant(format!(
            "generated {} labelled words of content {composition:?}, expected {estimate}",
            out.len()
        )));
    }
    Ok(out)
}

/// Runs through every way of placing the points of blocks `i..` on their
/// positions.
fn assign(
    i: usize,
    composition: &[usize],
    starts: &[usize],
    positions: &[Vec<usize>],
    labels: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if i == composition.len() {
        visit(labels);
        return;
    }
    let mut perm: Vec<usize> = (starts[i]..starts[i] + composition[i]).collect();
    loop {
        for (&pos, &s) in positions[i].iter().zip(&perm) {
            labels[pos] = s;
        }
        assign(i + 1, composition, starts, positions, labels, visit);
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The chain of partitions `[x_0 < … < x_r]` attached to a labelled weak
/// Lyndon word.
///
/// The reduction function is applied repeatedly, carrying along the set of
/// labels absorbed by each composite letter. Stage `i ≥ 0` (starting after
/// the first reduction) gives the partition `x_i` whose blocks are these
/// label sets. Repeated stages are dropped, and so are `0̂` and `1̂`, which
/// leaves a chain in the proper part of the partition lattice.
///
/// Every intermediate word is checked to be weak Lyndon, and the final word
/// to be a power of one letter.
pub fn chain_from_word(w: &LabelledWord) -> Result<Vec<Partition>> {
    let n = w.labels.len();
    let mut letters: Vec<Letter> = w.word.letters().to_vec();
    let mut sets: Vec<Vec<usize>> = w.labels.iter().map(|&s| vec![s]).collect();
    let mut chain: Vec<Partition> = Vec::new();
    loop {
        let pairs = reduce_pairs(&letters);
        if pairs.len() == letters.len() {
            break;
        }
        let mut next_letters = Vec::with_capacity(pairs.len());
        let mut next_sets = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let mut l = letters[a].clone();
            let mut s = sets[a].clone();
            if let Some(b) = b {
                l.extend_from_slice(&letters[b]);
                s.extend_from_slice(&sets[b]);
            }
            next_letters.push(l);
            next_sets.push(s);
        }
        if !super::is_weak_lyndon(&next_letters) {
            return Err(Error::invariant(format!(
                "reduction of {} left the weak Lyndon words",
                Word {
                    letters: letters.clone()
                }
            )));
        }
        letters = next_letters;
        sets = next_sets;
        let mut block = vec![0usize; n];
        for (b, set) in sets.iter().enumerate() {
            for &s in set {
                block[s] = b;
            }
        }
        let x = Partition::from_labels(&block);
        if !x.is_indiscrete() && !x.is_discrete() && chain.last() != Some(&x) {
            chain.push(x);
        }
    }
    if letters.windows(2).any(|p| p[0] != p[1]) {
        return Err(Error::invariant(format!(
            "reduction of {} stopped before reaching a letter power",
            w.word
        )));
    }
    Ok(chain)
}

/// One divisor term of the branching identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingTerm {
    pub d: usize,
    pub lyndon_count: u128,
    pub index: u128,
    pub stabilizer_factor: u128,
}

/// Both sides of `(n−1)! = Σ_{d | gcd} |B(n_i/d)| · (n_1!…n_k!/d!) · (d−1)!`.
///
/// The term for `d` counts the top homology of the wedge summands coming
/// from period-`d` words: `|B(n_i/d)|` Lyndon roots, each induced up from
/// the diagonal `Σ_d` with index `n_1!…n_k!/d!`, tensored with the
/// `(d−1)!`-dimensional homology of `|Π_d|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingIdentity {
    pub lhs: u128,
    pub rhs: u128,
    pub terms: Vec<BranchingTerm>,
    pub holds: bool,
}

pub fn branching_dimension_identity(composition: &[usize]) -> Result<BranchingIdentity> {
    let n: usize = composition.iter().sum();
    if n < 2 || composition.contains(&0) {
        return Err(Error::arg(format!(
            "branching needs a composition of n ≥ 2 into positive parts, got {composition:?}"
        )));
    }
    let g = gcd_all(composition);
    let index: u128 = composition.iter().map(|&m| factorial(m)).product();
    let terms: Vec<BranchingTerm> = (1..=g)
        .filter(|d| g.is_multiple_of(*d))
        .map(|d| {
            let reduced: Vec<usize> = composition.iter().map(|m| m / d).collect();
            BranchingTerm {
                d,
                lyndon_count: witt_count(&reduced),
                index: index / factorial(d),
                stabilizer_factor: factorial(d - 1),
            }
        })
        .collect();
    let lhs = factorial(n - 1);
    let rhs = terms
        .iter()
        .map(|t| t.lyndon_count * t.index * t.stabilizer_factor)
        .sum();
    Ok(BranchingIdentity {
        lhs,
        rhs,
        terms,
        holds: lhs == rhs,
    })
}
