use super::*;

fn q() -> Field {
    Field::Rationals
}

fn parse_group(n: usize, gens: &[&str]) -> GroupAction {
    GroupAction::parse(n, gens).unwrap()
}

/// Invariant partitions found by testing every group element, not just the
/// generators.
fn brute_invariant(n: usize, group: &GroupAction) -> Vec<Partition> {
    let elements = group.elements().unwrap();
    Partition::all(n)
        .into_iter()
        .filter(|p| elements.iter().all(|g| &p.act(g) == p))
        .collect()
}

fn labels(parts: &[Partition]) -> Vec<String> {
    let mut v: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    v.sort();
    v
}

#[test]
fn invariant_partitions_of_a_double_transposition() {
    let g = parse_group(4, &["(1 2)(3 4)"]);
    let found = invariant_partitions(4, &g).unwrap();
    assert_eq!(labels(&found), labels(&brute_invariant(4, &g)));
    let proper: Vec<Partition> = found
        .into_iter()
        .filter(|p| !p.is_discrete() && !p.is_indiscrete())
        .collect();
    let expected: Vec<Partition> = ["12|34", "13|24", "14|23", "12|3|4", "1|2|34"]
        .iter()
        .map(|s| Partition::parse(4, s).unwrap())
        .collect();
    assert_eq!(labels(&proper), labels(&expected));
}

#[test]
fn generator_filter_matches_element_filter() {
    for gens in [
        vec!["(1 2 3)"],
        vec!["(1 2)", "(3 4 5)"],
        vec!["(1 2)(3 4)", "(1 3)(2 4)"],
        vec!["(1 2 3 4 5 6)"],
    ] {
        let n = if gens.iter().any(|s| s.contains('6')) { 6 } else { 5 };
        let g = parse_group(n, &gens);
        assert_eq!(
            labels(&invariant_partitions(n, &g).unwrap()),
            labels(&brute_invariant(n, &g)),
            "{gens:?}"
        );
    }
}

#[test]
fn trivial_group_fixes_everything() {
    for n in 2..=6 {
        let l = fixed_subposet(n, &GroupAction::trivial(n)).unwrap();
        assert_eq!(l.len() as u128, bell_number(n));
    }
    let b = fixed_point_betti(5, &GroupAction::trivial(5), q()).unwrap();
    assert_eq!(b.betti, BTreeMap::from([(2, 24)]));
}

#[test]
fn fixed_subposet_is_a_lattice() {
    let g = parse_group(6, &["(1 2)(3 4)(5 6)"]);
    fixed_subposet(6, &g).unwrap().check_axioms().unwrap();
}

#[test]
fn classification_examples() {
    let c = classify_action(3, &parse_group(3, &["(1 2)"])).unwrap();
    assert_eq!(c.kind, ActionKind::NonIsotypical);
    assert_eq!(c.complements, 0);
    assert!(c.relabeling.is_none());

    let c = classify_action(4, &parse_group(4, &["(1 2)(3 4)"])).unwrap();
    assert_eq!(c.kind, ActionKind::Isotypical { d: 2, m: 2 });
    assert_eq!(c.complements, 2);

    let c = classify_action(3, &parse_group(3, &["(1 2 3)"])).unwrap();
    assert_eq!(c.kind, ActionKind::Transitive { d: 3 });
}

#[test]
fn equal_sizes_do_not_make_orbits_isomorphic() {
    // Two orbits of size 2 with different stabilizers in the Klein group.
    let g = parse_group(4, &["(1 2)", "(3 4)"]);
    let c = classify_action(4, &g).unwrap();
    assert_eq!(c.kind, ActionKind::NonIsotypical);
    assert!(fixed_point_betti(4, &g, q()).unwrap().is_zero());
}

#[test]
fn relabeling_aligns_orbits_diagonally() {
    let g = parse_group(6, &["(1 4)(2 6)(3 5)"]);
    let c = classify_action(6, &g).unwrap();
    assert_eq!(c.kind, ActionKind::Isotypical { d: 2, m: 3 });
    let pi = c.relabeling.unwrap();
    let h = pi.compose(&g.generators[0]).compose(&pi.inverse());
    for j in 0..3 {
        assert_eq!(h.apply(2 * j), 2 * j + 1);
    }
}

#[test]
fn lemma_on_transitive_groups() {
    let c4 = invariant_partitions_as_subgroups(&parse_group(4, &["(1 2 3 4)"])).unwrap();
    assert!(c4.holds());
    let orders: Vec<usize> = c4.subgroups.iter().map(|s| s.0).collect();
    assert_eq!(
        orders.iter().copied().collect::<BTreeSet<_>>(),
        BTreeSet::from([1, 2, 4])
    );
    let middle = c4.subgroups.iter().find(|s| s.0 == 2).unwrap();
    assert_eq!(middle.1, Partition::parse(4, "13|24").unwrap());

    let s3 = invariant_partitions_as_subgroups(&GroupAction::symmetric(3)).unwrap();
    assert!(s3.holds());
    assert_eq!(s3.subgroups.len(), 2);
    assert_eq!(s3.stabilizer_order, 2);

    let klein = invariant_partitions_as_subgroups(&parse_group(4, &["(1 2)(3 4)", "(1 3)(2 4)"])).unwrap();
    assert!(klein.holds());
    assert_eq!(klein.subgroups.len(), 5);
    let l = fixed_subposet(4, &parse_group(4, &["(1 2)(3 4)", "(1 3)(2 4)"])).unwrap();
    assert_eq!(l.len(), 5);
    let proper: Vec<usize> = (0..l.len()).filter(|&x| x != l.bottom() && x != l.top()).collect();
    assert!(proper.iter().all(|&a| proper.iter().all(|&b| a == b || !l.leq(a, b))));

    let wreath = invariant_partitions_as_subgroups(&iterated_wreath(&[2, 2], 4).unwrap()).unwrap();
    assert!(wreath.holds());
    assert!(invariant_partitions_as_subgroups(&parse_group(4, &["(1 2)"])).is_err());
}

#[test]
fn predicted_fixed_point_examples() {
    let t = predicted_fixed_point_betti(2, 1, 2, q()).unwrap();
    assert_eq!(t.betti, BTreeMap::from([(0, 2)]));
    let t = predicted_fixed_point_betti(2, 2, 1, q()).unwrap();
    assert_eq!(t.betti, BTreeMap::from([(0, 2)]));
    let t = predicted_fixed_point_betti(2, 1, 4, q()).unwrap();
    assert_eq!(t.betti, BTreeMap::from([(2, 48)]));
    assert!(predicted_fixed_point_betti(4, 1, 2, q()).is_err());
}

#[test]
fn elementary_abelian_groups_act_freely() {
    for (p, k, m) in [(2, 1, 3), (2, 2, 2), (3, 1, 2), (3, 2, 1)] {
        let g = elementary_abelian_free(p, k, m).unwrap();
        let elements = g.elements().unwrap();
        assert_eq!(elements.len(), (p as usize).pow(k as u32));
        assert!(elements
            .iter()
            .all(|e| e.is_identity() || (0..g.degree).all(|x| e.apply(x) != x)));
        assert_eq!(point_orbits(&g).len(), m);
    }
}

#[test]
fn small_free_fixed_points_match_prediction() {
    for (p, k, m) in [(2, 1, 2), (2, 1, 3), (2, 2, 1), (3, 1, 2)] {
        let g = elementary_abelian_free(p, k, m).unwrap();
        let n = m * (p as usize).pow(k as u32);
        for field in [q(), Field::Prime(2), Field::Prime(3)] {
            let computed = fixed_point_betti(n, &g, field).unwrap();
            let predicted = predicted_fixed_point_betti(p, k, m, field).unwrap();
            assert_eq!(computed.betti, predicted.betti, "p={p} k={k} m={m} {field:?}");
        }
    }
}

/// Cycle types of `n` with at least two distinct cycle lengths.
fn mixed_cycle_types(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for c in (1..=rest.min(max)).rev() {
            cur.push(c);
            rec(rest - c, c, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(n, n, &mut Vec::new(), &mut all);
    all.into_iter().filter(|t| t.iter().any(|&c| c != t[0])).collect()
}

#[test]
fn non_isotypical_cyclic_fixed_points_are_acyclic() {
    for n in 3..=6 {
        for t in mixed_cycle_types(n) {
            let g = cyclic_subgroup(&t).unwrap();
            assert_eq!(classify_action(n, &g).unwrap().kind, ActionKind::NonIsotypical, "{t:?}");
            for field in [q(), Field::Prime(2)] {
                assert!(fixed_point_betti(n, &g, field).unwrap().is_zero(), "{t:?} {field:?}");
            }
        }
    }
}

#[test]
fn wreath_fixed_points_are_acyclic() {
    let w = iterated_wreath(&[2, 2], 4).unwrap();
    assert_eq!(w.order().unwrap(), 8);
    assert_eq!(classify_action(4, &w).unwrap().kind, ActionKind::Transitive { d: 4 });
    assert!(fixed_point_betti(4, &w, q()).unwrap().is_zero());
    let w = iterated_wreath(&[2, 2], 8).unwrap();
    assert_eq!(
        classify_action(8, &w).unwrap().kind,
        ActionKind::Isotypical { d: 4, m: 2 }
    );
    assert!(fixed_point_betti(8, &w, Field::Prime(2)).unwrap().is_zero());
}

#[test]
fn isotypical_splitting_on_fixtures() {
    let cases = [
        parse_group(4, &["(1 2)(3 4)"]),
        parse_group(6, &["(1 2)(3 4)(5 6)"]),
        parse_group(6, &["(1 2 3)(4 5 6)"]),
        parse_group(6, &["(1 2 3)(4 5 6)", "(1 2)(4 5)"]),
        elementary_abelian_free(2, 2, 2).unwrap(),
    ];
    for g in &cases {
        let s = isotypical_splitting(g.degree, g, q()).unwrap();
        assert!(s.holds, "{g:?}: {:?} vs {:?}", s.predicted, s.computed);
    }
    assert!(isotypical_splitting(4, &GroupAction::trivial(4), q()).is_err());
    assert!(isotypical_splitting(3, &parse_group(3, &["(1 2)"]), q()).is_err());
}

#[test]
fn degree_mismatch_is_an_argument_error() {
    assert!(matches!(
        fixed_subposet(5, &GroupAction::trivial(4)),
        Err(Error::Argument(_))
    ));
}
