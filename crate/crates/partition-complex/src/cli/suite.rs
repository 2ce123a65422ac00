//! Named batteries of checks comparing computations with closed forms.
//!
//! `fast` holds everything that finishes in about two minutes on one core,
//! `full` adds the larger partition lattices, and `extended` adds the
//! largest atom computations.

use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use super::report::{compare, CheckFlag};
use crate::collapse::{build_matching, orthogonal_chains, parabolic_fan, wedge_betti, young_fan};
use crate::error::{Error, Result};
use crate::fixed_points::{
    cyclic_subgroup, elementary_abelian_free, fixed_point_betti, iterated_wreath, predicted_fixed_point_betti,
};
use crate::homology::{betti_numbers_over, BettiTable, DegreeRanks, Field};
use crate::lyndon::{branching_dimension_identity, gcd_all, lyndon_words, witt_count};
use crate::poset_core::{subspace_lattice, FiniteLattice, GroupAction, VectorSpace};
use crate::predictions::{
    bredon_euler_check, computed_quotient_betti_fields, ehp_rank_identity, model_betti, predicted_atom_betti,
    predicted_quotient_betti, symmetric_smash_betti, torsion_bound_check, wedge_of_spheres_classifier,
};
use crate::simplicial::{
    atom_model, nerve_model, orbit_chain_complex_with, ChainBasis, CollapsedNerveModel, NerveEnds,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Fast,
    Full,
    Extended,
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Tier::Fast),
            "full" => Ok(Tier::Full),
            "extended" => Ok(Tier::Extended),
            other => Err(Error::arg(format!(
                "unknown suite {other:?}; expected fast, full or extended"
            ))),
        }
    }
}

/// Outcome of one fixture.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub id: String,
    pub criterion: u8,
    pub tier: Tier,
    pub flag: CheckFlag,
    pub detail: String,
}

type Check = Box<dyn Fn(usize) -> Result<(bool, String)> + Send + Sync>;

pub struct Fixture {
    pub id: String,
    pub criterion: u8,
    pub tier: Tier,
    check: Check,
}

fn fixture(
    criterion: u8,
    tier: Tier,
    id: impl Into<String>,
    check: impl Fn(usize) -> Result<(bool, String)> + Send + Sync + 'static,
) -> Fixture {
    Fixture {
        id: format!("c{criterion:02}/{}", id.into()),
        criterion,
        tier,
        check: Box::new(check),
    }
}

/// Compositions of `n` into positive parts, in lexicographic order.
pub fn compositions_of(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions_of(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn tables(model: &CollapsedNerveModel, fields: &[Field], bound: usize) -> Result<Vec<BettiTable>> {
    let c = orbit_chain_complex_with(model, Field::Rationals, ChainBasis::FactorTensor, bound)?;
    Ok(fields.iter().map(|&f| betti_numbers_over(&c, f)).collect())
}

fn partition_nerve(n: usize, group: Option<&GroupAction>) -> Result<CollapsedNerveModel> {
    let l = Arc::new(FiniteLattice::partition_lattice(n)?);
    let m = nerve_model(l, NerveEnds::Open);
    match group {
        Some(g) => m.with_group(g),
        None => Ok(m),
    }
}

fn show(t: &BettiTable) -> String {
    serde_json::to_string(&DegreeRanks::from(t)).unwrap_or_default()
}

fn same(computed: &BettiTable, expected: &BettiTable) -> Result<(bool, String)> {
    let c = compare(computed, expected)?;
    Ok((
        c.flag == CheckFlag::Pass,
        format!(
            "{} computed {} expected {}",
            computed.field,
            show(computed),
            show(expected)
        ),
    ))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Every fixture of every tier, in criterion order.
pub fn fixtures() -> Vec<Fixture> {
    use Tier::*;
    let mut out = Vec::new();

    for n in 3..=7 {
        let tier = if n <= 6 { Fast } else { Full };
        out.push(fixture(1, tier, format!("wedge-n{n}"), move |bound| {
            let t = tables(&partition_nerve(n, None)?, &[Field::Rationals], bound)?.remove(0);
            same(
                &t,
                &BettiTable::from_pairs(Field::Rationals, &[(n as i64 - 3, factorial(n - 1))]),
            )
        }));
    }

    for n in 3..=6 {
        out.push(fixture(2, Fast, format!("symmetric-quotient-n{n}"), move |bound| {
            let fields = [Field::Rationals, Field::Prime(2), Field::Prime(3)];
            let ts = tables(&partition_nerve(n, Some(&GroupAction::symmetric(n)))?, &fields, bound)?;
            let ok = ts.iter().all(|t| t.is_zero() && t.truncated_from.is_none());
            Ok((ok, ts.iter().map(show).collect::<Vec<_>>().join(" ")))
        }));
    }

    out.push(fixture(3, Fast, "young-4-4", |bound| {
        let fields = [Field::Rationals, Field::Prime(2)];
        let ts = computed_quotient_betti_fields(&[4, 4], &fields, bound)?;
        let want = [
            BettiTable::from_pairs(Field::Rationals, &[(5, 8)]),
            BettiTable::from_pairs(Field::Prime(2), &[(4, 1), (5, 9)]),
        ];
        let mut ok = true;
        let mut detail = Vec::new();
        for (t, w) in ts.iter().zip(&want) {
            let (a, d) = same(t, w)?;
            let (b, _) = same(t, &predicted_quotient_betti(&[4, 4], t.field)?)?;
            ok &= a && b;
            detail.push(d);
        }
        Ok((ok, detail.join("; ")))
    }));

    for n in 3..=7 {
        let tier = if n <= 6 { Fast } else { Full };
        out.push(fixture(4, tier, format!("orthogonal-count-n{n}"), move |_| {
            let l = FiniteLattice::partition_lattice(n)?;
            let mut bad = Vec::new();
            for m in compositions_of(n).into_iter().filter(|m| m.len() > 1) {
                let count = orthogonal_chains(&young_fan(&l, &m)?)?.chains.len() as u128;
                let g = gcd_all(&m);
                let index: u128 = m.iter().map(|&x| factorial(x) as u128).product();
                let formula: u128 = (1..=g)
                    .filter(|d| g.is_multiple_of(*d))
                    .map(|d| {
                        let reduced: Vec<usize> = m.iter().map(|x| x / d).collect();
                        index / factorial(d) as u128 * witt_count(&reduced)
                    })
                    .sum();
                if count != formula {
                    bad.push(format!("{m:?}: {count} vs {formula}"));
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    "all compositions agree".into()
                } else {
                    bad.join(", ")
                },
            ))
        }));
    }
    for n in 3..=6 {
        out.push(fixture(4, Fast, format!("matching-n{n}"), move |_| {
            let l = FiniteLattice::partition_lattice(n)?;
            let mut bad = Vec::new();
            for m in compositions_of(n).into_iter().filter(|m| m.len() > 1) {
                let checks = build_matching(&young_fan(&l, &m)?)?.checks;
                if !(checks.perfect && checks.acyclic && checks.equivariant) {
                    bad.push(format!("{m:?}: {checks:?}"));
                }
            }
            Ok((bad.is_empty(), bad.join(", ")))
        }));
    }

    for n in 3..=7 {
        let tier = if n <= 6 { Fast } else { Full };
        out.push(fixture(5, tier, format!("wedge-assembly-n{n}"), move |bound| {
            let l = FiniteLattice::partition_lattice(n)?;
            let direct = tables(&partition_nerve(n, None)?, &[Field::Rationals], bound)?.remove(0);
            let mut bad = Vec::new();
            for m in compositions_of(n).into_iter().filter(|m| m.len() > 1) {
                let fan = young_fan(&l, &m)?;
                let w = wedge_betti(&fan, &orthogonal_chains(&fan)?, Field::Rationals)?;
                if w.ranks() != direct.ranks() {
                    bad.push(format!("{m:?}"));
                }
            }
            Ok((bad.is_empty(), bad.join(", ")))
        }));
    }
    out.push(fixture(5, Fast, "branching-identity", |_| {
        let mut bad = Vec::new();
        for n in 2..=9 {
            for m in compositions_of(n) {
                if !branching_dimension_identity(&m)?.holds {
                    bad.push(format!("{m:?}"));
                }
            }
        }
        Ok((bad.is_empty(), bad.join(", ")))
    }));

    for (p, k, m) in [
        (2u64, 1usize, 2usize),
        (2, 1, 3),
        (2, 1, 4),
        (2, 2, 1),
        (2, 2, 2),
        (3, 1, 2),
        (3, 1, 3),
    ] {
        out.push(fixture(6, Fast, format!("elementary-p{p}-k{k}-m{m}"), move |_| {
            let g = elementary_abelian_free(p, k, m)?;
            let t = fixed_point_betti(g.degree, &g, Field::Rationals)?;
            same(&t, &predicted_fixed_point_betti(p, k, m, Field::Rationals)?)
        }));
    }
    out.push(fixture(6, Fast, "non-isotypical-cyclic", |_| {
        let mut bad = Vec::new();
        for n in 2..=6 {
            for ct in cycle_types(n) {
                let g = cyclic_subgroup(&ct)?;
                let mut lengths = ct.clone();
                lengths.dedup();
                if lengths.len() > 1 && !fixed_point_betti(n, &g, Field::Rationals)?.is_zero() {
                    bad.push(format!("{ct:?}"));
                }
            }
        }
        Ok((bad.is_empty(), bad.join(", ")))
    }));
    out.push(fixture(6, Fast, "wreath-2-2", |_| {
        let g = iterated_wreath(&[2, 2], 4)?;
        let t = fixed_point_betti(4, &g, Field::Rationals)?;
        Ok((t.is_zero(), show(&t)))
    }));

    for (q, n) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3)] {
        let tier = if (q, n) == (3, 3) { Full } else { Fast };
        out.push(fixture(7, tier, format!("building-q{q}-n{n}"), move |bound| {
            let l = Arc::new(subspace_lattice(q, n)?);
            let t = tables(&nerve_model(l, NerveEnds::Open), &[Field::Rationals], bound)?.remove(0);
            let steinberg = q.pow((n * (n - 1) / 2) as u32);
            same(
                &t,
                &BettiTable::from_pairs(Field::Rationals, &[(n as i64 - 2, steinberg)]),
            )
        }));
    }
    out.push(fixture(7, Fast, "parabolic-matching-q2-n3", |_| {
        let v = VectorSpace::new(2, 3)?;
        let l = subspace_lattice(2, 3)?;
        let gl = v.general_linear_group()?;
        let line = l
            .index_of_subspace(&v.span([v.encode(&[1, 0, 0])]))
            .ok_or_else(|| Error::invariant("line not found"))?;
        let plane = l
            .index_of_subspace(&v.span([v.encode(&[1, 0, 0]), v.encode(&[0, 1, 0])]))
            .ok_or_else(|| Error::invariant("plane not found"))?;
        let checks = build_matching(&parabolic_fan(&l, &gl, &[line, plane])?)?.checks;
        Ok((checks.perfect && checks.acyclic, format!("{checks:?}")))
    }));

    let atoms: [(u64, usize, usize, Tier); 11] = [
        (2, 2, 1, Fast),
        (2, 2, 2, Fast),
        (2, 2, 3, Fast),
        (2, 2, 4, Fast),
        (2, 3, 1, Fast),
        (2, 3, 2, Fast),
        (2, 4, 1, Fast),
        (3, 2, 1, Fast),
        (3, 3, 1, Fast),
        (2, 4, 2, Extended),
        (3, 3, 3, Extended),
    ];
    for (p, n, ell, tier) in atoms {
        out.push(fixture(8, tier, format!("atom-p{p}-n{n}-l{ell}"), move |bound| {
            let field = Field::Prime(p);
            let t = model_betti(&atom_model(n, ell)?, field, bound)?;
            same(&t, &predicted_atom_betti(field, ell, n)?)
        }));
    }

    for field in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
        out.push(fixture(9, Fast, format!("ehp-d2-m2-{field}"), move |bound| {
            let r = ehp_rank_identity(field, 2, 2, bound)?;
            Ok((r.holds, format!("{:?} failures at {:?}", r.form, r.failures)))
        }));
    }

    out.push(fixture(10, Fast, "witt-totals-to-10", |_| {
        let mut bad = Vec::new();
        let mut cases = 0;
        for total in 1..=10 {
            for m in compositions_of(total) {
                cases += 1;
                if witt_count(&m) != lyndon_words(&m).len() as u128 {
                    bad.push(format!("{m:?}"));
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("{cases} compositions, {} disagreements", bad.len()),
        ))
    }));

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
        out.push(fixture(
            11,
            Fast,
            format!("symmetric-power-p{p}-n{n}-l{ell}"),
            move |bound| {
                let field = Field::Prime(p);
                let t = model_betti(&CollapsedNerveModel::sym_smash(n, ell)?, field, bound)?;
                same(&t, &symmetric_smash_betti(p, n, ell)?)
            },
        ));
    }
    out.push(fixture(11, Fast, "bredon-euler", |_| {
        let mut bad = Vec::new();
        for k in 1..=3 {
            for p in [2u64, 3, 5] {
                for ell in [1usize, 3, 5, 7] {
                    if !bredon_euler_check(p, ell, k)?.matches {
                        bad.push(format!("p={p} l={ell} k={k}"));
                    }
                }
            }
        }
        Ok((bad.is_empty(), bad.join(", ")))
    }));

    for c in [vec![2usize, 2], vec![3, 3], vec![2, 2, 2]] {
        out.push(fixture(12, Fast, format!("torsion-{}", join(&c)), move |bound| {
            let g = gcd_all(&c) as u64;
            let primes: Vec<u64> = [2u64, 3, 5, 7].into_iter().filter(|&p| p > g).collect();
            let r = torsion_bound_check(&c, &primes, bound)?;
            Ok((r.holds, format!("rational {}", show(&r.rational))))
        }));
    }
    out.push(fixture(12, Fast, "classifier-confirmed", |_| {
        let mut bad = Vec::new();
        for n in 3..=9 {
            for c in compositions_of(n) {
                if !wedge_of_spheres_classifier(&c)?.confirmed {
                    bad.push(join(&c));
                }
            }
        }
        Ok((bad.is_empty(), bad.join(" ")))
    }));

    out
}

fn join(c: &[usize]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-")
}

/// Partitions of `n` written as non-increasing cycle lengths.
fn cycle_types(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Runs every fixture of `tier` and the tiers below it.
pub fn run_tier(tier: Tier, bound: usize) -> Vec<FixtureResult> {
    fixtures()
        .into_iter()
        .filter(|f| f.tier <= tier)
        .map(|f| {
            let (flag, detail) = match (f.check)(bound) {
                Ok((ok, d)) => (CheckFlag::from_bool(ok), d),
                Err(e) => (CheckFlag::Fail, e.to_string()),
            };
            FixtureResult {
                id: f.id,
                criterion: f.criterion,
                tier: f.tier,
                flag,
                detail,
            }
        })
        .collect()
}
