//! Acceptance battery: one PASS/FAIL line per criterion, exact equality
//! throughout.
//!
//! Closed forms are evaluated here from scratch (factorials, brute-force
//! Lyndon enumeration, brute-force atom sequences) and compared with both
//! the simplicial computations and the library's predictions.
//!
//! Criterion 12 asks the wedge classifier to agree with the gcd criterion
//! for the quotient to be a wedge of spheres. That criterion is false for
//! `n = 3p` with `p` odd: the quotient then has `p`-torsion, as the computed
//! `F_3`-homology of the atom `Σ|Π_3|^◇ ∧ (S^2)^{∧3}/Σ_3` shows. The line
//! reports FAIL with the exact disagreements, and the run fails only if the
//! disagreements differ from that known list.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use partition_complex::collapse::{build_matching, orthogonal_chains, parabolic_fan, wedge_betti, young_fan};
use partition_complex::fixed_points::{
    classify_action, cyclic_subgroup, elementary_abelian_free, fixed_point_betti, invariant_partitions_as_subgroups,
    iterated_wreath, predicted_fixed_point_betti, ActionKind,
};
use partition_complex::homology::{betti_numbers_over, BettiTable, Field};
use partition_complex::lyndon::{
    branching_dimension_identity, chain_from_word, labelled_weak_lyndon_words, lyndon_words, witt_count,
};
use partition_complex::poset_core::{subspace_lattice, Chain, FiniteLattice, GroupAction, VectorSpace};
use partition_complex::predictions::{
    bredon_euler_check, computed_quotient_betti_fields, corollary_wedge_verdict, ehp_rank_identity, model_betti,
    predicted_atom_betti, predicted_quotient_betti, symmetric_smash_betti, wedge_of_spheres_classifier, EhpForm,
};
use partition_complex::simplicial::{
    atom_model, nerve_model, orbit_chain_complex_with, ChainBasis, CollapsedNerveModel, NerveEnds, DEFAULT_CHAIN_BOUND,
};

const Q: Field = Field::Rationals;
const F2: Field = Field::Prime(2);
const F3: Field = Field::Prime(3);

type Criterion = (u8, &'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
    /// For a failing criterion: the failure is exactly the known one.
    known_failure: bool,
}

impl Verdict {
    fn of(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
            known_failure: false,
        }
    }
}

fn tail(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; mismatches: {}", bad.join(", "))
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn table(field: Field, pairs: &[(i64, u64)]) -> BTreeMap<i64, u64> {
    BettiTable::from_pairs(field, pairs).betti
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gcd_of(c: &[usize]) -> usize {
    c.iter().fold(0, |g, &x| gcd(g, x))
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn partition_nerve(n: usize, group: Option<&GroupAction>) -> CollapsedNerveModel {
    let m = nerve_model(Arc::new(FiniteLattice::partition_lattice(n).unwrap()), NerveEnds::Open);
    match group {
        Some(g) => m.with_group(g).unwrap(),
        None => m,
    }
}

fn betti_tables(model: &CollapsedNerveModel, fields: &[Field]) -> Vec<BettiTable> {
    let c = orbit_chain_complex_with(model, Q, ChainBasis::FactorTensor, DEFAULT_CHAIN_BOUND).unwrap();
    fields.iter().map(|&f| betti_numbers_over(&c, f)).collect()
}

/// Distinct rearrangements of `letters` in lexicographic order.
fn for_each_arrangement(mut letters: Vec<u8>, mut visit: impl FnMut(&[u8])) {
    letters.sort_unstable();
    loop {
        visit(&letters);
        let Some(i) = (1..letters.len()).rev().find(|&i| letters[i - 1] < letters[i]) else {
            return;
        };
        let j = (i..letters.len()).rev().find(|&j| letters[j] > letters[i - 1]).unwrap();
        letters.swap(i - 1, j);
        letters[i..].reverse();
    }
}

fn strictly_below_rotations(w: &[u8]) -> bool {
    (1..w.len()).all(|r| {
        let rotated = w[r..].iter().chain(&w[..r]);
        w.iter().lt(rotated)
    })
}

fn content_letters(content: &[usize]) -> Vec<u8> {
    content
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i as u8 + 1, m))
        .collect()
}

/// Lyndon words of a content, counted by testing every rearrangement.
fn brute_lyndon_count(content: &[usize]) -> u128 {
    let mut count = 0;
    for_each_arrangement(content_letters(content), |w| {
        count += strictly_below_rotations(w) as u128
    });
    count
}

fn criterion_1() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 3..=7usize {
        let t = &betti_tables(&partition_nerve(n, None), &[Q])[0];
        let want = table(Q, &[(n as i64 - 3, factorial(n as u64 - 1))]);
        ok &= t.betti == want && t.truncated_from.is_none();
        notes.push(format!("n={n} {:?}", t.betti));
    }
    let pi7 = FiniteLattice::partition_lattice(7).unwrap();
    ok &= pi7.len() == 877;
    notes.push(format!("|P_7| = {} elements, {} proper", pi7.len(), pi7.len() - 2));
    Verdict::of(ok, notes.join("; "))
}

fn criterion_2() -> Verdict {
    let mut ok = true;
    for n in 3..=6 {
        let ts = betti_tables(&partition_nerve(n, Some(&GroupAction::symmetric(n))), &[Q, F2, F3]);
        ok &= ts.iter().all(|t| t.is_zero() && t.truncated_from.is_none());
    }
    Verdict::of(
        ok,
        "reduced homology of |Pi_n|/S_n vanishes over Q, F2, F3 for n = 3..6",
    )
}

fn criterion_3() -> Verdict {
    let ts = computed_quotient_betti_fields(&[4, 4], &[Q, F2], DEFAULT_CHAIN_BOUND).unwrap();
    let expected_q = table(Q, &[(5, 8)]);
    let expected_2 = table(F2, &[(4, 1), (5, 9)]);
    let predicted_q = predicted_quotient_betti(&[4, 4], Q).unwrap().betti;
    let predicted_2 = predicted_quotient_betti(&[4, 4], F2).unwrap().betti;
    let ok = ts[0].betti == expected_q
        && ts[1].betti == expected_2
        && predicted_q == expected_q
        && predicted_2 == expected_2;
    Verdict::of(
        ok,
        format!(
            "computed Q {:?}, F2 {:?}; predicted Q {predicted_q:?}, F2 {predicted_2:?}",
            ts[0].betti, ts[1].betti
        ),
    )
}

fn criterion_4() -> Verdict {
    let mut bad = Vec::new();
    let mut cases = 0;
    for n in 2..=7 {
        let l = FiniteLattice::partition_lattice(n).unwrap();
        for m in compositions(n).into_iter().filter(|m| m.len() > 1) {
            cases += 1;
            let fan = young_fan(&l, &m).unwrap();
            let chains: Vec<Chain> = orthogonal_chains(&fan)
                .unwrap()
                .chains
                .into_iter()
                .map(|c| c.chain)
                .collect();
            let g = gcd_of(&m);
            let index: u64 = m.iter().map(|&x| factorial(x as u64)).product();
            let formula: u128 = (1..=g)
                .filter(|d| g.is_multiple_of(*d))
                .map(|d| {
                    let reduced: Vec<usize> = m.iter().map(|x| x / d).collect();
                    (index / factorial(d as u64)) as u128 * brute_lyndon_count(&reduced)
                })
                .sum();
            if chains.len() as u128 != formula {
                bad.push(format!("{m:?} count {} vs {formula}", chains.len()));
            }
            let images: BTreeSet<Chain> = labelled_weak_lyndon_words(&m)
                .unwrap()
                .iter()
                .map(|w| {
                    chain_from_word(w)
                        .unwrap()
                        .iter()
                        .map(|p| l.index_of(p).unwrap())
                        .collect()
                })
                .collect();
            let generated: BTreeSet<Chain> = chains.iter().cloned().collect();
            if images != generated || images.len() != chains.len() {
                bad.push(format!("{m:?} word bijection"));
            }
            if (3..=6).contains(&n) {
                let checks = build_matching(&fan).unwrap().checks;
                if !(checks.perfect && checks.acyclic && checks.equivariant) {
                    bad.push(format!("{m:?} matching {checks:?}"));
                }
            }
        }
    }
    Verdict::of(
        bad.is_empty(),
        format!(
            "{cases} compositions of n <= 7, count = sum over d | gcd of (n_1!...n_k!/d!)|B(n_i/d)|; {}",
            if bad.is_empty() {
                "all agree".to_string()
            } else {
                bad.join(", ")
            }
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut bad = Vec::new();
    for n in 2..=7 {
        let l = FiniteLattice::partition_lattice(n).unwrap();
        let direct = &betti_tables(&partition_nerve(n, None), &[Q])[0];
        for m in compositions(n).into_iter().filter(|m| m.len() > 1) {
            let fan = young_fan(&l, &m).unwrap();
            let assembled = wedge_betti(&fan, &orthogonal_chains(&fan).unwrap(), Q).unwrap();
            if assembled.betti != direct.betti {
                bad.push(format!("{m:?} wedge"));
            }
        }
    }
    for n in 2..=9 {
        for m in compositions(n) {
            let g = gcd_of(&m);
            let index: u128 = m.iter().map(|&x| factorial(x as u64) as u128).product();
            let rhs: u128 = (1..=g)
                .filter(|d| g.is_multiple_of(*d))
                .map(|d| {
                    let reduced: Vec<usize> = m.iter().map(|x| x / d).collect();
                    brute_lyndon_count(&reduced) * index / factorial(d as u64) as u128 * factorial(d as u64 - 1) as u128
                })
                .sum();
            let id = branching_dimension_identity(&m).unwrap();
            if !id.holds || rhs != factorial(n as u64 - 1) as u128 || id.rhs != rhs {
                bad.push(format!("{m:?} identity"));
            }
        }
    }
    Verdict::of(
        bad.is_empty(),
        if bad.is_empty() {
            "wedge assembly n <= 7, dimension identity totals <= 9".into()
        } else {
            bad.join(", ")
        },
    )
}

fn criterion_6() -> Verdict {
    let mut bad = Vec::new();
    for (p, k, m) in [
        (2u64, 1usize, 2usize),
        (2, 1, 3),
        (2, 1, 4),
        (2, 2, 1),
        (2, 2, 2),
        (3, 1, 2),
        (3, 1, 3),
    ] {
        let g = elementary_abelian_free(p, k, m).unwrap();
        let t = fixed_point_betti(g.degree, &g, Q).unwrap();
        let rank = factorial(m as u64 - 1) * p.pow((k * (m - 1) + k * (k.saturating_sub(1)) / 2) as u32);
        let want = table(Q, &[(m as i64 + k as i64 - 3, rank)]);
        if t.betti != want || predicted_fixed_point_betti(p, k, m, Q).unwrap().betti != want {
            bad.push(format!("(p,k,m)=({p},{k},{m}) got {:?}", t.betti));
        }
    }
    let mut non_isotypical = 0;
    for n in 2..=6 {
        for c in compositions(n)
            .into_iter()
            .filter(|c| c.windows(2).all(|w| w[0] >= w[1]))
        {
            if c.iter().collect::<BTreeSet<_>>().len() < 2 {
                continue;
            }
            non_isotypical += 1;
            let g = cyclic_subgroup(&c).unwrap();
            let kind = classify_action(n, &g).unwrap().kind;
            if kind != ActionKind::NonIsotypical || !fixed_point_betti(n, &g, Q).unwrap().is_zero() {
                bad.push(format!("cycle type {c:?}"));
            }
        }
    }
    if !fixed_point_betti(4, &iterated_wreath(&[2, 2], 4).unwrap(), Q)
        .unwrap()
        .is_zero()
    {
        bad.push("S2 wr S2".into());
    }
    let transitive = [
        GroupAction::parse(4, &["(1 2 3 4)"]).unwrap(),
        GroupAction::symmetric(3),
        GroupAction::parse(4, &["(1 2)(3 4)", "(1 3)(2 4)"]).unwrap(),
        iterated_wreath(&[2, 2], 4).unwrap(),
        GroupAction::parse(6, &["(1 2 3 4 5 6)"]).unwrap(),
    ];
    for g in &transitive {
        if !invariant_partitions_as_subgroups(g).unwrap().holds() {
            bad.push(format!("subgroup correspondence for {:?}", g.generators));
        }
    }
    Verdict::of(
        bad.is_empty(),
        format!("7 free elementary abelian fixtures, {non_isotypical} non-isotypical cyclic groups, wreath, 5 transitive groups{}", tail(&bad)),
    )
}

fn criterion_7() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (q, n) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3)] {
        let l = Arc::new(subspace_lattice(q, n).unwrap());
        let t = &betti_tables(&nerve_model(l, NerveEnds::Open), &[Q])[0];
        let want = table(Q, &[(n as i64 - 2, q.pow((n * (n - 1) / 2) as u32))]);
        ok &= t.betti == want;
        notes.push(format!("(q,n)=({q},{n}) {:?}", t.betti));
    }
    let v = VectorSpace::new(2, 3).unwrap();
    let l = subspace_lattice(2, 3).unwrap();
    let line = l.index_of_subspace(&v.span([v.encode(&[1, 0, 0])])).unwrap();
    let plane = l
        .index_of_subspace(&v.span([v.encode(&[1, 0, 0]), v.encode(&[0, 1, 0])]))
        .unwrap();
    let checks = build_matching(&parabolic_fan(&l, &v.general_linear_group().unwrap(), &[line, plane]).unwrap())
        .unwrap()
        .checks;
    ok &= checks.perfect && checks.acyclic;
    notes.push(format!(
        "parabolic matching perfect={} acyclic={}",
        checks.perfect, checks.acyclic
    ));
    Verdict::of(ok, notes.join("; "))
}

/// Atom basis sequences `(i_1, …, i_k)` for `n = p^k`, by exhaustive search
/// over a box, as degrees `Σ i_j + ℓ + k`.
fn brute_atom_degrees(p: usize, n: usize, ell: usize) -> BTreeMap<i64, u64> {
    let mut k = 0;
    let mut q = 1;
    while q < n {
        q *= p;
        k += 1;
    }
    let mut out = BTreeMap::new();
    if q != n {
        return out;
    }
    let top = (p - 1) * ell;
    let cap = top * p.pow(k as u32);
    let mut seq = vec![0usize; k];
    fn go(j: usize, seq: &mut Vec<usize>, p: usize, top: usize, cap: usize, ell: usize, out: &mut BTreeMap<i64, u64>) {
        if j == seq.len() {
            let k = seq.len();
            let ok = (0..k).all(|a| seq[a] % (2 * (p - 1)) <= 1 && seq[a] > 1)
                && (0..k.saturating_sub(1)).all(|a| seq[a] < p * seq[a + 1])
                && seq[k - 1] <= top;
            if ok {
                *out.entry((seq.iter().sum::<usize>() + ell + k) as i64).or_insert(0) += 1;
            }
            return;
        }
        for i in 2..=cap {
            seq[j] = i;
            go(j + 1, seq, p, top, cap, ell, out);
        }
    }
    if k > 0 {
        go(0, &mut seq, p, top, cap, ell, &mut out);
    }
    out
}

fn criterion_8() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    let fast = [
        (2u64, 2usize, 1usize),
        (2, 2, 2),
        (2, 2, 3),
        (2, 2, 4),
        (2, 3, 1),
        (2, 3, 2),
        (2, 4, 1),
        (3, 2, 1),
        (3, 3, 1),
    ];
    let extended = [(2u64, 4usize, 2usize), (3, 3, 3)];
    for (p, n, ell) in fast.into_iter().chain(extended) {
        let field = Field::Prime(p);
        let computed = model_betti(&atom_model(n, ell).unwrap(), field, DEFAULT_CHAIN_BOUND).unwrap();
        let predicted = predicted_atom_betti(field, ell, n).unwrap();
        let brute = brute_atom_degrees(p as usize, n, ell);
        let agree = computed.betti == predicted.betti && computed.truncated_from.is_none();
        // The closed form below is stated for odd l when p is odd.
        let brute_ok = (p == 2 || ell % 2 == 1) && predicted.betti == brute;
        ok &= agree && brute_ok;
        notes.push(format!("(p={p},n={n},l={ell}) {:?}", computed.betti));
    }
    Verdict::of(ok, notes.join("; "))
}

fn criterion_9() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (field, form) in [(Q, EhpForm::HE), (F2, EhpForm::EP), (F3, EhpForm::HE)] {
        let r = ehp_rank_identity(field, 2, 2, DEFAULT_CHAIN_BOUND).unwrap();
        ok &= r.holds && r.form == form && r.left.betti == table(field, &[(6, 1)]);
        notes.push(format!(
            "{field} {:?} left {:?} middle {:?} right {:?}",
            r.form, r.left.betti, r.middle.betti, r.right.betti
        ));
    }
    Verdict::of(ok, notes.join("; "))
}

fn criterion_10() -> Verdict {
    let mut cases = 0;
    let mut bad = Vec::new();
    for total in 1..=10 {
        for m in compositions(total) {
            cases += 1;
            let words = lyndon_words(&m);
            let mut ok = witt_count(&m) == words.len() as u128;
            if total <= 8 {
                ok &= brute_lyndon_count(&m) == words.len() as u128;
                let distinct: BTreeSet<Vec<u8>> = words
                    .iter()
                    .map(|w| w.letters().iter().map(|l| l[0]).collect::<Vec<u8>>())
                    .filter(|w| strictly_below_rotations(w) && w.len() == total)
                    .collect();
                ok &= distinct.len() == words.len();
            }
            if !ok {
                bad.push(format!("{m:?}"));
            }
        }
    }
    Verdict::of(
        bad.is_empty(),
        format!("{cases} compositions with total <= 10{}", tail(&bad)),
    )
}

fn criterion_11() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (p, n, ell) in [
        (2u64, 2usize, 1usize),
        (2, 2, 2),
        (2, 2, 3),
        (2, 2, 4),
        (2, 3, 1),
        (2, 3, 2),
        (3, 2, 1),
        (3, 3, 1),
    ] {
        let field = Field::Prime(p);
        let computed = model_betti(
            &CollapsedNerveModel::sym_smash(n, ell).unwrap(),
            field,
            DEFAULT_CHAIN_BOUND,
        )
        .unwrap();
        let assembled = symmetric_smash_betti(p, n, ell).unwrap();
        ok &= computed.betti == assembled.betti;
        notes.push(format!("(p={p},n={n},l={ell}) {:?}", computed.betti));
    }
    let mut euler = 0;
    for k in 1..=3 {
        for p in [2u64, 3, 5] {
            for ell in [1usize, 3, 5, 7] {
                euler += 1;
                ok &= bredon_euler_check(p, ell, k).unwrap().matches;
            }
        }
    }
    notes.push(format!("{euler} Bredon-Euler cases"));
    Verdict::of(ok, notes.join("; "))
}

fn criterion_12() -> Verdict {
    let mut notes = Vec::new();
    let mut torsion_ok = true;
    for c in [vec![2usize, 2], vec![3, 3], vec![2, 2, 2]] {
        let g = gcd_of(&c);
        let primes: Vec<Field> = [2u64, 3, 5, 7]
            .into_iter()
            .filter(|&p| p as usize > g)
            .map(Field::Prime)
            .collect();
        let mut fields = vec![Q];
        fields.extend(&primes);
        let ts = computed_quotient_betti_fields(&c, &fields, DEFAULT_CHAIN_BOUND).unwrap();
        torsion_ok &= ts[1..].iter().all(|t| t.betti == ts[0].betti);
        notes.push(format!(
            "{c:?} Q {:?} equals F_p for p in {:?}",
            ts[0].betti,
            primes.iter().map(|f| f.characteristic()).collect::<Vec<_>>()
        ));
    }

    // The atom behind the n = 3p summands, computed directly.
    let atom = model_betti(&atom_model(3, 2).unwrap(), F3, DEFAULT_CHAIN_BOUND).unwrap();
    let atom_has_torsion = atom.betti == table(F3, &[(7, 1), (8, 1)]);

    let mut disagreements = Vec::new();
    let mut unconfirmed = Vec::new();
    for n in 3..=9 {
        for c in compositions(n) {
            let v = wedge_of_spheres_classifier(&c).unwrap();
            let g = gcd_of(&c);
            let literal = g == 1 || (is_prime(g) && (n == 2 * g || n == 3 * g));
            if literal != corollary_wedge_verdict(&c) || !v.confirmed {
                unconfirmed.push(format!("{c:?}"));
            }
            if v.wedge != literal {
                disagreements.push(c);
            }
        }
    }
    let mut known: Vec<Vec<usize>> = (3..=9).map(|n| vec![n]).collect();
    known.extend([vec![3, 3, 3], vec![3, 6], vec![6, 3]]);
    known.sort();
    disagreements.sort();

    let pass = torsion_ok && unconfirmed.is_empty() && disagreements.is_empty();
    notes.push(format!(
        "classifier vs gcd criterion on compositions of n <= 9: disagreements {:?}; atom(3, 2) over F3 {:?}",
        disagreements, atom.betti
    ));
    Verdict {
        pass,
        known_failure: torsion_ok && unconfirmed.is_empty() && atom_has_torsion && disagreements == known,
        detail: notes.join("; "),
    }
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "wedge-of-spheres baseline", criterion_1),
        (2, "full symmetric quotient contractible", criterion_2),
        (3, "worked example |Pi_8|/(S4 x S4)", criterion_3),
        (4, "branching rule, structural", criterion_4),
        (5, "branching rule, homological", criterion_5),
        (6, "fixed points", criterion_6),
        (7, "Bruhat-Tits building", criterion_7),
        (8, "atom homology", criterion_8),
        (9, "EHP rank identity", criterion_9),
        (10, "Witt oracle", criterion_10),
        (11, "F_k and Bredon-Euler oracle", criterion_11),
        (12, "torsion bound and wedge classifier", criterion_12),
    ];
    let filter: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        let flag = if v.pass { "PASS" } else { "FAIL" };
        println!("{flag} criterion {id:>2} {title} [{secs:.1}s]: {}", v.detail);
        if !v.pass && !v.known_failure {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
