//! Closed-form homology predictions.
//!
//! For a wedge of spheres `X = S^{ℓ_1} ∨ … ∨ S^{ℓ_k}` the reduced homology
//! of `C(X) = ⋁_d Σ|Π_d|^◇ ∧_{Σ_d} X^{∧d}` has a basis of allowable
//! sequences `(i_1, …, i_a, e, w)` with `w` a Lyndon word. Strict Young
//! quotients of `|Π_n|` are a double desuspension of one multi-weight piece
//! of `C(S^0 ∨ … ∨ S^0)`. Atoms `Σ|Π_n|^◇ ∧_{Σ_n} (S^ℓ)^{∧n}` over `F_p`
//! use the same inequalities with a single letter, and symmetric smash
//! powers `(S^ℓ)^{∧n}/Σ_n` are assembled from the functors `F_k`.
//!
//! The module also hosts the checks that compare these formulas with each
//! other and with simplicial computations: the Bredon Euler characteristic,
//! the EHP rank identity, the torsion bound and the wedge classifier.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{betti_numbers, betti_numbers_over, BettiTable, Field};
use crate::lyndon::{gcd_all, lyndon_words, witt_count, Word};
use crate::poset_core::subspace::is_prime;
use crate::poset_core::{FiniteLattice, GroupAction};
use crate::simplicial::{
    atom_model, nerve_model, orbit_chain_complex_with, ChainBasis, CollapsedNerveModel, NerveEnds,
};

#[cfg(test)]
mod tests;

/// Each entry `i_j` of an allowable sequence contributes `i_j` plus this
/// to the homological degree.
pub const SEQUENCE_ENTRY_SHIFT: i64 = 1;

/// Degree shift from the multi-weight `(n_1, …, n_k)` piece of
/// `C(S^0 ∨ … ∨ S^0)` to `|Π_n|/Σ_{n_1}×…×Σ_{n_k}`.
pub const QUOTIENT_SHIFT: i64 = -2;

/// Largest number of Lyndon words materialized for one multi-weight.
pub const LYNDON_ENUMERATION_BOUND: u128 = 1_000_000;

/// Largest sequence count produced by one enumeration.
pub const SEQUENCE_BOUND: usize = 5_000_000;

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::arg(format!("{p} is not prime")));
    }
    Ok(())
}

/// `i ≡ 0` or `1` modulo `2(p − 1)`.
fn admissible_residue(p: u64, i: u64) -> bool {
    i % (2 * (p - 1)) <= 1
}

/// The value of `ε` for a word of degree `|w|`: `1` when `p` is odd and
/// `|w|` is even, or when `|w| = 0`. Over `Q` it is `1` exactly for even
/// `|w|`.
pub fn epsilon(field: Field, word_degree: i64) -> u8 {
    let even = word_degree.rem_euclid(2) == 0;
    match field {
        Field::Prime(2) => (word_degree == 0) as u8,
        Field::Rationals | Field::Prime(_) => even as u8,
    }
}

/// Sequences `(i_1, …, i_a)` with every `i_j ≡ 0, 1 mod 2(p−1)`,
/// `1 < i_j < p·i_{j+1}` and `1 < i_a ≤ top`, in lexicographic order.
fn unstable_sequences(p: u64, a: usize, top: u64) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    if a == 0 {
        out.push(Vec::new());
        return Ok(out);
    }
    let mut rev = Vec::with_capacity(a);
    extend_unstable(p, a, top + 1, &mut rev, &mut out)?;
    out.sort();
    Ok(out)
}

/// Pushes entries from the last one backwards; `limit` is the exclusive
/// upper bound for the next entry.
fn extend_unstable(p: u64, a: usize, limit: u64, rev: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) -> Result<()> {
    if rev.len() == a {
        out.push(rev.iter().rev().copied().collect());
        if out.len() > SEQUENCE_BOUND {
            return Err(Error::resource(
                "allowable sequences",
                out.len() as u128,
                SEQUENCE_BOUND as u128,
            ));
        }
        return Ok(());
    }
    for i in (2..limit).filter(|&i| admissible_residue(p, i)) {
        rev.push(i);
        extend_unstable(p, a, p * i, rev, out)?;
        rev.pop();
    }
    Ok(())
}

/// A basis element `(i_1, …, i_a, e, w)` of the homology of `C(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AllowableSequence {
    pub i: Vec<u64>,
    pub e: u8,
    pub w: Word,
    /// `|w| = Σ (1 + ℓ_j) m_j − 1` for the content `m` of `w`.
    pub word_degree: i64,
    pub degree: i64,
    pub weight: Vec<usize>,
}

impl AllowableSequence {
    pub fn a(&self) -> usize {
        self.i.len()
    }
}

/// All sequences allowable over `field` that live in multi-weight `weight`
/// of `C(S^{ℓ_1} ∨ … ∨ S^{ℓ_k})`, ordered by `(a, i, e, w)`.
///
/// A sequence lives in weight `p^a (1 + e) · content(w)`; over `Q` only
/// `a = 0` occurs.
pub fn allowable_sequences(field: Field, ells: &[usize], weight: &[usize]) -> Result<Vec<AllowableSequence>> {
    if ells.is_empty() || ells.len() != weight.len() {
        return Err(Error::arg(format!(
            "need one sphere dimension per weight entry, got {} and {}",
            ells.len(),
            weight.len()
        )));
    }
    if weight.iter().all(|&x| x == 0) {
        return Err(Error::arg("the weight window is empty; give a nonzero multi-weight"));
    }
    let p = field.characteristic();
    let g = gcd_all(weight);
    let mut out = Vec::new();
    for e in 0..=1u8 {
        let mut scale = 1 + e as usize;
        let mut a = 0usize;
        while g.is_multiple_of(scale) {
            let m: Vec<usize> = weight.iter().map(|&x| x / scale).collect();
            let word_degree = ells.iter().zip(&m).map(|(&l, &mi)| ((1 + l) * mi) as i64).sum::<i64>() - 1;
            let eps = epsilon(field, word_degree);
            if e <= eps {
                let seqs = if a == 0 {
                    vec![Vec::new()]
                } else {
                    let top = (p - 1) * (1 + e as u64) * word_degree as u64 + eps as u64;
                    unstable_sequences(p, a, top)?
                };
                if !seqs.is_empty() {
                    let words = witt_count(&m);
                    if words > LYNDON_ENUMERATION_BOUND {
                        return Err(Error::resource("Lyndon words", words, LYNDON_ENUMERATION_BOUND));
                    }
                    for w in lyndon_words(&m) {
                        for i in &seqs {
                            let entries: i64 = i.iter().map(|&x| x as i64 + SEQUENCE_ENTRY_SHIFT).sum();
                            out.push(AllowableSequence {
                                i: i.clone(),
                                e,
                                w: w.clone(),
                                word_degree,
                                degree: entries + (1 + e as i64) * word_degree + e as i64,
                                weight: weight.to_vec(),
                            });
                        }
                    }
                    if out.len() > SEQUENCE_BOUND {
                        return Err(Error::resource(
                            "allowable sequences",
                            out.len() as u128,
                            SEQUENCE_BOUND as u128,
                        ));
                    }
                }
            }
            if p == 0 {
                break;
            }
            scale *= p as usize;
            a += 1;
        }
    }
    out.sort_by(|x, y| (x.a(), &x.i, x.e, &x.w).cmp(&(y.a(), &y.i, y.e, &y.w)));
    Ok(out)
}

fn table_of(field: Field, degrees: impl IntoIterator<Item = i64>) -> BettiTable {
    let mut t = BettiTable::new(field);
    for d in degrees {
        t.add(d, 1);
    }
    t
}

/// Betti table of the multi-weight `weight` piece of
/// `C(S^{ℓ_1} ∨ … ∨ S^{ℓ_k})`.
pub fn predicted_multi_betti(field: Field, ells: &[usize], weight: &[usize]) -> Result<BettiTable> {
    let seqs = allowable_sequences(field, ells, weight)?;
    Ok(table_of(field, seqs.iter().map(|s| s.degree)))
}

fn check_composition(composition: &[usize]) -> Result<usize> {
    if composition.is_empty() || composition.contains(&0) {
        return Err(Error::arg(format!(
            "composition {composition:?} must have positive parts"
        )));
    }
    let n: usize = composition.iter().sum();
    if n < 2 {
        return Err(Error::arg("the quotient needs n >= 2"));
    }
    Ok(n)
}

/// The allowable sequences indexing a basis of
/// `H̃_*(|Π_n|/Σ_{n_1}×…×Σ_{n_k})`, with degrees already shifted.
pub fn quotient_sequences(composition: &[usize], field: Field) -> Result<Vec<AllowableSequence>> {
    check_composition(composition)?;
    let zeros = vec![0; composition.len()];
    let mut seqs = allowable_sequences(field, &zeros, composition)?;
    for s in &mut seqs {
        s.degree += QUOTIENT_SHIFT;
    }
    Ok(seqs)
}

/// Predicted reduced Betti numbers of `|Π_n|/Σ_{n_1}×…×Σ_{n_k}`.
pub fn predicted_quotient_betti(composition: &[usize], field: Field) -> Result<BettiTable> {
    let seqs = quotient_sequences(composition, field)?;
    Ok(table_of(field, seqs.iter().map(|s| s.degree)))
}

/// `Some(k)` when `n = p^k`.
fn power_of(p: u64, n: usize) -> Option<usize> {
    let mut q = 1usize;
    let mut k = 0;
    while q < n {
        q *= p as usize;
        k += 1;
    }
    (q == n).then_some(k)
}

/// Basis sequences `(i_1, …, i_k)` of `H̃_*(Σ|Π_{p^k}|^◇ ∧_{Σ_{p^k}} (S^ℓ)^{∧p^k}; F_p)`;
/// empty when `n` is not a power of `p`.
pub fn atom_sequences(p: u64, ell: usize, n: usize) -> Result<Vec<Vec<u64>>> {
    check_prime(p)?;
    if ell == 0 || n == 0 {
        return Err(Error::arg("atoms need l >= 1 and n >= 1"));
    }
    if p != 2 && ell.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "the atom formula over F{p} needs l odd; for even l use the multi-weight prediction, \
             which passes through the EHP sequence"
        )));
    }
    match power_of(p, n) {
        Some(k) => unstable_sequences(p, k, (p - 1) * ell as u64),
        None => Ok(Vec::new()),
    }
}

/// Predicted reduced Betti numbers of `Σ|Π_n|^◇ ∧_{Σ_n} (S^ℓ)^{∧n}`.
///
/// Over `F_p` this counts [`atom_sequences`]; over `Q` it is the
/// single-letter case of [`predicted_multi_betti`].
pub fn predicted_atom_betti(field: Field, ell: usize, n: usize) -> Result<BettiTable> {
    match field {
        Field::Rationals => {
            if ell == 0 || n == 0 {
                return Err(Error::arg("atoms need l >= 1 and n >= 1"));
            }
            predicted_multi_betti(field, &[ell], &[n])
        }
        Field::Prime(p) => {
            let seqs = atom_sequences(p, ell, n)?;
            let degree = |i: &Vec<u64>| i.iter().map(|&x| x as i64 + SEQUENCE_ENTRY_SHIFT).sum::<i64>() + ell as i64;
            Ok(table_of(field, seqs.iter().map(degree)))
        }
    }
}

/// A generator `(i_1, …, i_k; v)` of `F_k(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FkBasisElement {
    pub i: Vec<u64>,
    pub generator_degree: u64,
    pub degree: u64,
}

/// Generators of `F_k` applied to one class `v` of degree `v_degree`.
///
/// Conditions: `i_j ≡ 0, 1 mod 2(p−1)`, `i_j ≥ p·i_{j+1}`, `i_j ≠ 1`, and
/// `p·i_1 < (p−1)(|v| + Σ i_j)` for odd `p`, with `≤` at `p = 2`.
pub fn fk_basis(p: u64, k: usize, v_degree: u64) -> Result<Vec<FkBasisElement>> {
    check_prime(p)?;
    let mut out = Vec::new();
    if k == 0 {
        out.push(FkBasisElement {
            i: Vec::new(),
            generator_degree: v_degree,
            degree: v_degree,
        });
        return Ok(out);
    }
    // The last condition forces i_1 ≤ p^{k−1}(p−1)|v|.
    let top = p.pow(k as u32 - 1) * (p - 1) * v_degree;
    let mut cur = Vec::with_capacity(k);
    extend_fk(p, k, v_degree, top, &mut cur, &mut out)?;
    Ok(out)
}

fn extend_fk(p: u64, k: usize, v: u64, limit: u64, cur: &mut Vec<u64>, out: &mut Vec<FkBasisElement>) -> Result<()> {
    if cur.len() == k {
        let sum: u64 = cur.iter().sum();
        let lhs = p * cur[0];
        let rhs = (p - 1) * (v + sum);
        if lhs < rhs || (p == 2 && lhs == rhs) {
            out.push(FkBasisElement {
                i: cur.clone(),
                generator_degree: v,
                degree: v + sum,
            });
            if out.len() > SEQUENCE_BOUND {
                return Err(Error::resource(
                    "F_k generators",
                    out.len() as u128,
                    SEQUENCE_BOUND as u128,
                ));
            }
        }
        return Ok(());
    }
    for i in (2..=limit).filter(|&i| admissible_residue(p, i)) {
        cur.push(i);
        extend_fk(p, k, v, i / p, cur, out)?;
        cur.pop();
    }
    Ok(())
}

/// A graded dimension vector: degree to rank.
pub type Dimensions = BTreeMap<i64, u64>;

/// `dim F_k(W)` by degree, using that `F_k` is additive.
pub fn fk_apply(p: u64, k: usize, w: &Dimensions) -> Result<Dimensions> {
    let mut out = Dimensions::new();
    for (&d, &mult) in w {
        let d = u64::try_from(d).map_err(|_| Error::arg("F_k needs nonnegative degrees"))?;
        for b in fk_basis(p, k, d)? {
            *out.entry(b.degree as i64).or_insert(0) += mult;
        }
    }
    Ok(out)
}

/// `dim F_k(V)` for `V` one class in degree `ell`.
pub fn fk_dimension(p: u64, k: usize, ell: usize) -> Result<Dimensions> {
    fk_apply(p, k, &Dimensions::from([(ell as i64, 1)]))
}

/// `dim S_a(W)` by degree, where `S` is the exterior algebra at `p = 2`
/// and the free graded-commutative algebra for odd `p`.
pub fn graded_symmetric_power(p: u64, a: usize, w: &Dimensions) -> Dimensions {
    // ways[(count, degree)] = number of monomials
    let mut ways: BTreeMap<(usize, i64), u64> = BTreeMap::from([((0, 0), 1)]);
    for (&d, &mult) in w {
        let exterior = p == 2 || d.rem_euclid(2) == 1;
        for _ in 0..mult {
            let mut next = ways.clone();
            for (&(c, deg), &n) in &ways {
                let mut uses = 1;
                while c + uses <= a {
                    *next.entry((c + uses, deg + d * uses as i64)).or_insert(0) += n;
                    if exterior {
                        break;
                    }
                    uses += 1;
                }
            }
            ways = next;
        }
    }
    ways.into_iter()
        .filter(|&((c, _), _)| c == a)
        .map(|((_, deg), n)| (deg, n))
        .collect()
}

fn tensor(x: &Dimensions, y: &Dimensions) -> Dimensions {
    let mut out = Dimensions::new();
    for (&a, &m) in x {
        for (&b, &n) in y {
            *out.entry(a + b).or_insert(0) += m * n;
        }
    }
    out
}

/// Ways to write `n = Σ a_k p^k`, as vectors `(a_0, a_1, …)`.
pub fn p_partitions(p: u64, n: usize) -> Vec<Vec<usize>> {
    let mut powers = vec![1usize];
    while powers.last().unwrap() * (p as usize) <= n {
        powers.push(powers.last().unwrap() * p as usize);
    }
    let mut out = Vec::new();
    let mut cur = vec![0; powers.len()];
    fn rec(powers: &[usize], idx: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if idx == 0 {
            cur[0] = rest;
            out.push(cur.clone());
            return;
        }
        for a in 0..=rest / powers[idx] {
            cur[idx] = a;
            rec(powers, idx - 1, rest - a * powers[idx], cur, out);
        }
        cur[idx] = 0;
    }
    rec(&powers, powers.len() - 1, n, &mut cur, &mut out);
    out
}

/// `dim H̃_*((S^ℓ)^{∧n}/Σ_n; F_p)` assembled as
/// `⊕_{p-partitions} ⊗_k S_{a_k}(F_k(V))` with `V` one class in degree `ℓ`.
pub fn symmetric_smash_betti(p: u64, n: usize, ell: usize) -> Result<BettiTable> {
    check_prime(p)?;
    if n == 0 || ell == 0 {
        return Err(Error::arg("symmetric smash powers need n >= 1 and l >= 1"));
    }
    let mut total = Dimensions::new();
    for parts in p_partitions(p, n) {
        let mut acc = Dimensions::from([(0, 1)]);
        for (k, &a) in parts.iter().enumerate() {
            if a > 0 {
                acc = tensor(&acc, &graded_symmetric_power(p, a, &fk_dimension(p, k, ell)?));
            }
        }
        for (d, r) in acc {
            *total.entry(d).or_insert(0) += r;
        }
    }
    let mut t = BettiTable::new(Field::Prime(p));
    for (d, r) in total {
        t.add(d, r);
    }
    Ok(t)
}

/// Ordered partitions of `k` into positive parts.
pub fn ordered_partitions(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=k {
        for mut rest in ordered_partitions(k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The Bredon-direction Euler characteristic of the pure summands for
/// `Σ|Π_{p^k}|^◇ ∧_{Σ_{p^k}} (S^ℓ)^{∧p^k}`, compared with the atom basis.
#[derive(Clone, Debug, Serialize)]
pub struct BredonEulerCheck {
    pub p: u64,
    pub ell: usize,
    pub k: usize,
    /// `Σ_{(k_1..k_r)} (−1)^{r−1} dim F_{k_1}⋯F_{k_r}(V)` by internal degree.
    #[serde(with = "signed_keys")]
    pub euler: BTreeMap<i64, i64>,
    /// Atom basis counts by atom degree.
    pub allowable: BettiTable,
    /// Atom degree minus internal degree: `k − 1` Bredon degrees plus one
    /// suspension.
    pub degree_shift: i64,
    pub matches: bool,
}

mod signed_keys {
    use std::collections::BTreeMap;

    use serde::Serializer;

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, i64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
    }
}

pub fn bredon_euler_check(p: u64, ell: usize, k: usize) -> Result<BredonEulerCheck> {
    check_prime(p)?;
    if k == 0 || ell == 0 {
        return Err(Error::arg("the Euler check needs k >= 1 and l >= 1"));
    }
    let allowable = predicted_atom_betti(Field::Prime(p), ell, (p as usize).pow(k as u32))?;
    let mut euler: BTreeMap<i64, i64> = BTreeMap::new();
    for parts in ordered_partitions(k) {
        let sign = if parts.len() % 2 == 1 { 1 } else { -1 };
        let mut dims = Dimensions::from([(ell as i64, 1)]);
        for &kj in parts.iter().rev() {
            dims = fk_apply(p, kj, &dims)?;
        }
        for (d, r) in dims {
            *euler.entry(d).or_insert(0) += sign * r as i64;
        }
    }
    euler.retain(|_, v| *v != 0);
    let degree_shift = k as i64;
    let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
    let expected: BTreeMap<i64, i64> = allowable
        .ranks()
        .iter()
        .map(|(&d, &r)| (d - degree_shift, sign * r as i64))
        .collect();
    let matches = expected == euler;
    Ok(BredonEulerCheck {
        p,
        ell,
        k,
        euler,
        allowable,
        degree_shift,
        matches,
    })
}

/// Reduced Betti numbers of the strict orbit quotient of `model`.
pub fn model_betti(model: &CollapsedNerveModel, field: Field, bound: usize) -> Result<BettiTable> {
    let complex = orbit_chain_complex_with(model, field, ChainBasis::FactorTensor, bound)?;
    Ok(betti_numbers(&complex))
}

fn young_quotient_model(composition: &[usize]) -> Result<Option<CollapsedNerveModel>> {
    let n = check_composition(composition)?;
    if n == 2 {
        return Ok(None);
    }
    let l = Arc::new(FiniteLattice::partition_lattice(n)?);
    Ok(Some(
        nerve_model(l, NerveEnds::Open).with_group(&GroupAction::young(composition))?,
    ))
}

/// Simplicially computed reduced Betti numbers of `|Π_n|/Σ_{n_1}×…×Σ_{n_k}`.
pub fn computed_quotient_betti(composition: &[usize], field: Field, bound: usize) -> Result<BettiTable> {
    Ok(computed_quotient_betti_fields(composition, &[field], bound)?.remove(0))
}

/// Same as [`computed_quotient_betti`] for several fields from one complex.
pub fn computed_quotient_betti_fields(
    composition: &[usize],
    fields: &[Field],
    bound: usize,
) -> Result<Vec<BettiTable>> {
    match young_quotient_model(composition)? {
        // Π_2 is empty and its nerve is the (−1)-sphere.
        None => Ok(fields.iter().map(|&f| BettiTable::from_pairs(f, &[(-1, 1)])).collect()),
        Some(model) => {
            let complex = orbit_chain_complex_with(&model, Field::Rationals, ChainBasis::FactorTensor, bound)?;
            Ok(fields.iter().map(|&f| betti_numbers_over(&complex, f)).collect())
        }
    }
}

/// Which short exact sequence the EHP cofibre sequence induces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EhpForm {
    /// `0 → H(left) → H(middle) → H(right) → 0`, over `Q` and odd `p`.
    HE,
    /// `0 → H_t(middle) → H_t(right) → H_{t−1}(left) → 0`, over `F_2`.
    EP,
}

/// The three terms of the EHP sequence at weight `d` for the sphere `S^m`
/// and the rank identity between them.
#[derive(Clone, Debug, Serialize)]
pub struct EhpCheck {
    pub field: Field,
    pub d: usize,
    pub m: usize,
    /// `Σ²|Π_{d/2}|^◇ ∧ (S^{2m+1})^{∧d/2}`, or a point for odd `d`.
    pub left: BettiTable,
    /// `Σ²|Π_d|^◇ ∧ (S^m)^{∧d}`.
    pub middle: BettiTable,
    /// `Σ|Π_d|^◇ ∧ (S^{m+1})^{∧d}`.
    pub right: BettiTable,
    pub form: EhpForm,
    /// Degrees where the rank identity fails.
    pub failures: Vec<i64>,
    pub holds: bool,
}

pub fn ehp_rank_identity(field: Field, d: usize, m: usize, bound: usize) -> Result<EhpCheck> {
    if d == 0 {
        return Err(Error::arg("the EHP weight d must be positive"));
    }
    if m == 0 || m % 2 == 1 {
        return Err(Error::Precondition(format!(
            "the EHP sequence needs an even sphere dimension m >= 2, got {m}"
        )));
    }
    let left = if d.is_multiple_of(2) {
        model_betti(&atom_model(d / 2, 2 * m + 1)?.suspend(1), field, bound)?
    } else {
        BettiTable::new(field)
    };
    let middle = model_betti(&atom_model(d, m)?.suspend(1), field, bound)?;
    let right = model_betti(&atom_model(d, m + 1)?, field, bound)?;
    let form = if field == Field::Prime(2) {
        EhpForm::EP
    } else {
        EhpForm::HE
    };
    let mut degrees: Vec<i64> = left
        .ranks()
        .keys()
        .flat_map(|&t| [t, t + 1])
        .chain(middle.ranks().keys().copied())
        .chain(right.ranks().keys().copied())
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    let failures: Vec<i64> = degrees
        .into_iter()
        .filter(|&t| match form {
            EhpForm::HE => middle.get(t) != left.get(t) + right.get(t),
            EhpForm::EP => right.get(t) != middle.get(t) + left.get(t - 1),
        })
        .collect();
    let truncated = [&left, &middle, &right].iter().any(|t| t.truncated_from.is_some());
    Ok(EhpCheck {
        field,
        d,
        m,
        holds: failures.is_empty() && !truncated,
        left,
        middle,
        right,
        form,
        failures,
    })
}

fn primes_up_to(n: usize) -> Vec<u64> {
    (2..=n as u64).filter(|&p| is_prime(p)).collect()
}

/// Why a Young quotient is or is not a wedge of spheres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum WedgeClause {
    /// A single block: the quotient by all of `Σ_n` is contractible, the
    /// empty wedge.
    SingleBlock,
    /// `gcd = 1`.
    CoprimeParts,
    /// `gcd = p` prime and `n = 2p`: the extra summands are contractible.
    PrimeDouble { p: u64 },
    /// `gcd = 2` and `n = 6`: the extra summand is `S^3`.
    TripleTwo,
    /// The summand `|Π_p|^◇ ∧_{Σ_p} S^{ℓp−1}` for the smallest prime `p`
    /// dividing the gcd has `p`-torsion.
    Obstructed { p: u64, ell: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeVerdict {
    pub composition: Vec<usize>,
    pub gcd: usize,
    pub wedge: bool,
    pub clause: WedgeClause,
    pub reason: String,
    /// The literal criterion: `gcd = 1`, or `gcd = p` prime with
    /// `n ∈ {2p, 3p}`.
    pub corollary_wedge: bool,
    /// Primes `p ≤ gcd` whose predicted `F_p` table differs from the
    /// rational one.
    pub torsion_primes: Vec<u64>,
    /// The verdict agrees with the torsion found in the predictions.
    pub confirmed: bool,
}

/// The literal wedge criterion on the gcd of the parts and their sum.
pub fn corollary_wedge_verdict(composition: &[usize]) -> bool {
    let n: usize = composition.iter().sum();
    let g = gcd_all(composition);
    g == 1 || (is_prime(g as u64) && (n == 2 * g || n == 3 * g))
}

/// Decides whether `|Π_n|/Σ_{n_1}×…×Σ_{n_k}` is a wedge of spheres, and
/// confirms the verdict against predicted homology over `Q` and every
/// `F_p` with `p ≤ gcd`.
///
/// The quotient splits into summands `|Π_d|^◇ ∧_{Σ_d} S^{ℓd−1}` with
/// `d | gcd` and `ℓ = n/d − 1`, one for each Lyndon word of content
/// `(n_i/d)`. At `d = p` prime these are contractible for `ℓ = 1`, equal to
/// `S^3` for `p = 2, ℓ = 2`, and carry `p`-torsion otherwise. For odd `p`
/// and `ℓ = 2` this is the atom `Σ|Π_p|^◇ ∧_{Σ_p} (S^2)^{∧p}`, whose
/// `F_p`-homology comes from the EHP sequence and is nonzero.
pub fn wedge_of_spheres_classifier(composition: &[usize]) -> Result<WedgeVerdict> {
    let n = check_composition(composition)?;
    if n < 3 {
        return Err(Error::arg("the classifier needs n >= 3"));
    }
    let g = gcd_all(composition);
    let (wedge, clause, reason) = if composition.len() == 1 {
        (true, WedgeClause::SingleBlock, format!("|Π_{n}|/Σ_{n} is contractible"))
    } else if g == 1 {
        (
            true,
            WedgeClause::CoprimeParts,
            format!("gcd is 1, so the quotient is a wedge of S^{}", n - 3),
        )
    } else if is_prime(g as u64) && n == 2 * g {
        (
            true,
            WedgeClause::PrimeDouble { p: g as u64 },
            format!("gcd is the prime {g} and n = 2·{g}"),
        )
    } else if g == 2 && n == 6 {
        (
            true,
            WedgeClause::TripleTwo,
            "gcd is 2 and n = 6, so the extra summands are 3-spheres".into(),
        )
    } else {
        let p = primes_up_to(g)
            .into_iter()
            .find(|&p| g.is_multiple_of(p as usize))
            .expect("gcd > 1 has a prime factor");
        let ell = n / p as usize - 1;
        (
            false,
            WedgeClause::Obstructed { p, ell },
            format!(
                "the summand |Π_{p}|^◇ ∧ S^{} over Σ_{p} has {p}-torsion",
                ell * p as usize - 1
            ),
        )
    };
    let rational = predicted_quotient_betti(composition, Field::Rationals)?;
    let mut torsion_primes = Vec::new();
    for p in primes_up_to(g) {
        if predicted_quotient_betti(composition, Field::Prime(p))?.ranks() != rational.ranks() {
            torsion_primes.push(p);
        }
    }
    let confirmed = wedge == torsion_primes.is_empty();
    Ok(WedgeVerdict {
        composition: composition.to_vec(),
        gcd: g,
        wedge,
        clause,
        reason,
        corollary_wedge: corollary_wedge_verdict(composition),
        torsion_primes,
        confirmed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeComparison {
    pub p: u64,
    pub table: BettiTable,
    pub equal_to_rational: bool,
    /// `p > gcd`, where equality is guaranteed.
    pub guaranteed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub composition: Vec<usize>,
    pub gcd: usize,
    pub rational: BettiTable,
    pub primes: Vec<PrimeComparison>,
    /// Every prime above the gcd gives the rational table.
    pub holds: bool,
}

/// Computes the quotient over `Q` and each listed prime and checks that the
/// tables agree for every prime above the gcd of the parts.
pub fn torsion_bound_check(composition: &[usize], primes: &[u64], bound: usize) -> Result<TorsionReport> {
    for &p in primes {
        check_prime(p)?;
    }
    let g = gcd_all(composition);
    let mut fields = vec![Field::Rationals];
    fields.extend(primes.iter().map(|&p| Field::Prime(p)));
    let mut tables = computed_quotient_betti_fields(composition, &fields, bound)?;
    let rational = tables.remove(0);
    let primes: Vec<PrimeComparison> = primes
        .iter()
        .zip(tables)
        .map(|(&p, table)| PrimeComparison {
            p,
            equal_to_rational: table.ranks() == rational.ranks(),
            guaranteed: p as usize > g,
            table,
        })
        .collect();
    let holds = primes.iter().all(|c| !c.guaranteed || c.equal_to_rational);
    Ok(TorsionReport {
        composition: composition.to_vec(),
        gcd: g,
        rational,
        primes,
        holds,
    })
}
