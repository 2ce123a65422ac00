//! Lyndon words, Witt counts and the reduction function on words over
//! composite letters.
//!
//! A letter `c_α` is indexed by a nonempty string `α` over `1..=k`, stored as
//! a `Vec<u8>`. Letters compare lexicographically with a proper prefix
//! counting as smaller, which is exactly the derived `Ord` on `Vec<u8>`, and
//! words compare the same way letter by letter. Simple letters `c_i` are the
//! one-character strings.

mod labelled;

pub use labelled::{
    branching_dimension_identity, chain_from_word, labelled_weak_lyndon_words, standard_labelling, BranchingIdentity,
    BranchingTerm, LabelledWord, LABELLED_WORD_BOUND,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A composite letter index `α`, a nonempty string over `1..=k`.
pub type Letter = Vec<u8>;

/// A nonempty word in composite letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::arg("a word needs at least one letter"));
        }
        if let Some(bad) = letters.iter().find(|l| l.is_empty() || l.contains(&0)) {
            return Err(Error::arg(format!(
                "letter index {bad:?} must be a nonempty string over 1..k"
            )));
        }
        Ok(Word { letters })
    }

    /// A word in simple letters, given by their 1-based indices.
    pub fn simple(indices: &[u8]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| vec![i]).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of occurrences of each simple letter `c_1..c_k` inside all
    /// composite letters.
    pub fn content(&self, k: usize) -> Vec<usize> {
        let mut m = vec![0; k];
        for &c in self.letters.iter().flatten() {
            if (c as usize) <= k {
                m[c as usize - 1] += 1;
            }
        }
        m
    }

    pub fn is_lyndon(&self) -> bool {
        is_lyndon(&self.letters)
    }

    pub fn is_weak_lyndon(&self) -> bool {
        is_weak_lyndon(&self.letters)
    }

    /// Length of the primitive root `u` and the exponent `d` with `w = u^d`.
    pub fn root(&self) -> (usize, usize) {
        let n = self.letters.len();
        let len = primitive_period(&self.letters);
        (len, n / len)
    }

    /// True when every letter is the same, i.e. the word is `c_α^i`.
    pub fn is_letter_power(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] == w[1])
    }

    /// The word written with `c` notation, e.g. `c1 c12 c1`.
    pub fn c_notation(&self) -> String {
        self.letters
            .iter()
            .map(|l| format!("c{}", letter_string(l)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn letter_string(l: &[u8]) -> String {
    if l.iter().all(|&c| c <= 9) {
        l.iter().map(|c| char::from(b'0' + c)).collect()
    } else {
        l.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Words print as space-separated letter indices, e.g. `1 12 1 13 2 3`.
/// Indices above 9 are written with dots between characters, e.g. `1.10`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| letter_string(l)).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            let token = token.strip_prefix('c').unwrap_or(token);
            let letter: Option<Letter> = if token.contains('.') {
                token.split('.').map(|p| p.parse::<u8>().ok()).collect()
            } else {
                token.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect()
            };
            match letter {
                Some(l) => letters.push(l),
                None => return Err(Error::arg(format!("cannot parse letter {token:?}"))),
            }
        }
        Word::new(letters)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True if `w` is strictly smaller than each of its nontrivial rotations.
pub fn is_lyndon<T: Ord>(w: &[T]) -> bool {
    !w.is_empty() && (1..w.len()).all(|r| rotation_cmp(w, r) == std::cmp::Ordering::Less)
}

/// True if `w` is smaller than or equal to each of its rotations.
pub fn is_weak_lyndon<T: Ord>(w: &[T]) -> bool {
    !w.is_empty() && (1..w.len()).all(|r| rotation_cmp(w, r) != std::cmp::Ordering::Greater)
}

/// Compares `w` with its rotation starting at position `r`.
fn rotation_cmp<T: Ord>(w: &[T], r: usize) -> std::cmp::Ordering {
    let n = w.len();
    (0..n)
        .map(|i| w[i].cmp(&w[(i + r) % n]))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

fn primitive_period<T: Eq>(w: &[T]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]))
        .unwrap_or(n)
}

/// All Lyndon words with exactly `m[i]` copies of `c_{i+1}`, in
/// lexicographic order.
///
/// Words are produced by the fixed-content prenecklace recursion, which
/// visits prenecklaces in lexicographic order. Words of length at most 12
/// are additionally confirmed by the rotation test.
pub fn lyndon_words(m: &[usize]) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_lyndon(m, |w| {
        debug_assert!(w.len() > 12 || is_lyndon(w));
        out.push(Word {
            letters: w.iter().map(|&c| vec![c]).collect(),
        });
    });
    out
}

/// Calls `visit` with every Lyndon word of content `m`, as 1-based simple
/// letter indices, in lexicographic order.
pub fn for_each_lyndon(m: &[usize], mut visit: impl FnMut(&[u8])) {
    let n: usize = m.iter().sum();
    if n == 0 {
        return;
    }
    let mut remaining = m.to_vec();
    // a[0] is a sentinel that is smaller than every letter.
    let mut a = vec![0u8; n + 1];
    prenecklace(1, 1, n, &mut a, &mut remaining, &mut visit);
}

fn prenecklace(t: usize, p: usize, n: usize, a: &mut [u8], rem: &mut [usize], visit: &mut impl FnMut(&[u8])) {
    if t > n {
        if p == n {
            visit(&a[1..]);
        }
        return;
    }
    let start = if t == 1 { 1 } else { a[t - p] };
    for c in start..=rem.len() as u8 {
        if rem[c as usize - 1] == 0 {
            continue;
        }
        a[t] = c;
        rem[c as usize - 1] -= 1;
        let next_p = if t > 1 && c == a[t - p] { p } else { t };
        prenecklace(t + 1, next_p, n, a, rem, visit);
        rem[c as usize - 1] += 1;
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn gcd_all(m: &[usize]) -> usize {
    m.iter().fold(0, |g, &x| gcd(g, x))
}

pub(crate) fn mobius(mut d: usize) -> i128 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if d > 1 {
        result = -result;
    }
    result
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub(crate) fn multinomial(m: &[usize]) -> u128 {
    let mut total = 0u128;
    let mut acc = 1u128;
    for &mi in m {
        for j in 1..=mi as u128 {
            total += 1;
            acc = acc * total / j;
        }
    }
    acc
}

/// Number of Lyndon words with content `m`, by Witt's formula
/// `(1/n) Σ_{d | gcd} μ(d) · multinomial(n/d; m_i/d)`.
pub fn witt_count(m: &[usize]) -> u128 {
    let n: usize = m.iter().sum();
    if n == 0 {
        return 0;
    }
    let g = gcd_all(m);
    let mut sum: i128 = 0;
    for d in (1..=g).filter(|d| g.is_multiple_of(*d)) {
        let mu = mobius(d);
        if mu != 0 {
            let reduced: Vec<usize> = m.iter().map(|x| x / d).collect();
            sum += mu * multinomial(&reduced) as i128;
        }
    }
    debug_assert!(sum >= 0 && sum % n as i128 == 0);
    (sum / n as i128) as u128
}

/// One application of the reduction function `(−)′`.
///
/// Let `α` be the smallest letter present. Scanning left to right, every
/// occurrence of `c_α` directly followed by a strictly larger letter `c_β` is
/// replaced by `c_{αβ}`; replaced pairs do not overlap.
pub fn reduce_word(w: &Word) -> Word {
    let idx = reduce_pairs(&w.letters);
    Word {
        letters: idx.into_iter().map(|(a, b)| merge_letters(&w.letters, a, b)).collect(),
    }
}

fn merge_letters(letters: &[Letter], a: usize, b: Option<usize>) -> Letter {
    let mut l = letters[a].clone();
    if let Some(b) = b {
        l.extend_from_slice(&letters[b]);
    }
    l
}

/// Positions grouped by one reduction step: `(i, Some(i + 1))` for a merged
/// pair and `(i, None)` for a letter kept as it is.
pub(crate) fn reduce_pairs(letters: &[Letter]) -> Vec<(usize, Option<usize>)> {
    let Some(min) = letters.iter().min() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(letters.len());
    let mut i = 0;
    while i < letters.len() {
        if &letters[i] == min && i + 1 < letters.len() && letters[i + 1] > *min {
            out.push((i, Some(i + 1)));
            i += 2;
        } else {
            out.push((i, None));
            i += 1;
        }
    }
    out
}

/// The words `w, w′, w″, …` up to the first fixed point of the reduction,
/// which is included once.
pub fn reduction_sequence(w: &Word) -> Vec<Word> {
    let mut seq = vec![w.clone()];
    loop {
        let next = reduce_word(seq.last().unwrap());
        if &next == seq.last().unwrap() {
            return seq;
        }
        seq.push(next);
    }
}
