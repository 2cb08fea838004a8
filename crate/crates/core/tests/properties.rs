//! Property tests for the laws each module promises.

mod common;

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use common::*;
use proportia_core::algebra::{eval_term, term_table, AlgebraPair, ElemId, PartialAlgebra, UNDEF};
use proportia_core::axioms::{check_all, consistent, Axiom, Verdict};
use proportia_core::baselines::{mbd_sets, recomposes, sy_numbers, sy_sets};
use proportia_core::clone::{Bounds, ClassSet};
use proportia_core::justification::{
    is_strictly_trivial, jus, jus_source, jus_target, witnesses, JusTable,
};
use proportia_core::lang::{parse_term, print_term, Language, Term};
use proportia_core::solver::{holds, solve};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn full_shape(size: usize, undefined: f64) -> Shape {
    Shape {
        size,
        binary: true,
        unary: true,
        constant: true,
        undefined,
    }
}

fn seeded(seed: u64, size: usize, undefined: f64) -> Arc<PartialAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_algebra(&mut rng, &format!("r{seed}"), full_shape(size, undefined))
}

fn arb_term(lang: Language, vars: u32) -> impl Strategy<Value = Term> {
    let consts: Vec<Term> = lang
        .constants()
        .iter()
        .map(|c| Term::constant(c.as_str()))
        .collect();
    let leaf = prop_oneof![
        (1..=vars).prop_map(Term::var),
        proptest::sample::select(consts),
    ];
    let fns: Vec<(String, usize)> = lang
        .functions()
        .iter()
        .map(|f| (f.name.clone(), f.rank))
        .collect();
    leaf.prop_recursive(5, 48, 3, move |inner| {
        proptest::sample::select(fns.clone()).prop_flat_map(move |(name, rank)| {
            proptest::collection::vec(inner.clone(), rank)
                .prop_map(move |args| Term::app(name.as_str(), args))
        })
    })
}

fn test_language() -> Language {
    Language::new(
        [("f".to_string(), 2), ("g".to_string(), 1)],
        ["k".to_string()],
    )
    .unwrap()
}

fn ref_depth(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Const(_) => 0,
        Term::App(_, args) => 1 + args.iter().map(ref_depth).max().unwrap_or(0),
    }
}

fn ref_size(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Const(_) => 1,
        Term::App(_, args) => 1 + args.iter().map(ref_size).sum::<usize>(),
    }
}

/// First-occurrence order, left to right.
fn ref_vars(t: &Term, out: &mut Vec<u32>) {
    match t {
        Term::Var(i) => {
            if !out.contains(i) {
                out.push(*i);
            }
        }
        Term::Const(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| ref_vars(a, out)),
    }
}

fn tuples(n: usize, k: usize) -> Vec<Vec<ElemId>> {
    (0..n.pow(k as u32))
        .map(|mut i| {
            let mut t = vec![0; k];
            for slot in t.iter_mut().rev() {
                *slot = (i % n) as ElemId;
                i /= n;
            }
            t
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(t in arb_term(test_language(), 3)) {
        let lang = test_language();
        prop_assert_eq!(parse_term(&print_term(&t), &lang).unwrap(), t);
    }

    #[test]
    fn depth_size_and_variables_follow_structure(t in arb_term(test_language(), 4)) {
        prop_assert_eq!(t.depth(), ref_depth(&t));
        prop_assert_eq!(t.size(), ref_size(&t));
        let mut vars = Vec::new();
        ref_vars(&t, &mut vars);
        prop_assert_eq!(t.max_variable(), vars.iter().copied().max().unwrap_or(0));
        prop_assert_eq!(t.variables(), vars);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_strict_homomorphism(
        seed in any::<u64>(),
        size in 1usize..=4,
        t in arb_term(test_language(), 2),
    ) {
        let alg = seeded(seed, size, 0.2);
        let lang = alg.language().clone();
        for asg in tuples(size, 2) {
            let value = eval_term(&alg, &t, &asg).unwrap();
            if let Term::App(sym, args) = &t {
                let vals: Vec<Option<ElemId>> =
                    args.iter().map(|a| eval_term(&alg, a, &asg).unwrap()).collect();
                let expected = if vals.iter().any(Option::is_none) {
                    None
                } else {
                    let args: Vec<ElemId> = vals.into_iter().map(Option::unwrap).collect();
                    let r = alg.apply(lang.function_index(sym).unwrap(), &args);
                    (r != UNDEF).then_some(r)
                };
                prop_assert_eq!(value, expected);
            }
        }
    }

    #[test]
    fn representatives_reproduce_their_tables(seed in any::<u64>(), size in 1usize..=3) {
        let src = seeded(seed, size, 0.1);
        let tgt = seeded(seed.wrapping_add(1), size + 1, 0.1);
        let pair = AlgebraPair::new(src.clone(), tgt.clone()).unwrap();
        let cs = ClassSet::enumerate(&pair, Bounds::new(2, 3, 20_000)).unwrap();
        for class in cs.classes() {
            let k = class.arity;
            prop_assert_eq!(term_table(&src, &class.representative, k).unwrap(), cs.source_table(class.id));
            prop_assert_eq!(term_table(&tgt, &class.representative, k).unwrap(), cs.target_table(class.id));
        }
    }

    #[test]
    fn deeper_bounds_only_add_classes(seed in any::<u64>(), size in 1usize..=3) {
        let alg = seeded(seed, size, 0.1);
        let pair = AlgebraPair::single(alg);
        let small = ClassSet::enumerate(&pair, Bounds::new(2, 2, 1_000_000)).unwrap();
        let large = ClassSet::enumerate(&pair, Bounds::new(2, 3, 1_000_000)).unwrap();
        for class in small.classes() {
            prop_assert!(large.class_of_arity(&class.representative, class.arity).unwrap().is_some());
        }
    }

    #[test]
    fn enumeration_is_deterministic(seed in any::<u64>(), size in 1usize..=4) {
        let pair = AlgebraPair::single(seeded(seed, size, 0.1));
        let bounds = Bounds::new(2, 3, 10_000);
        let first = ClassSet::enumerate(&pair, bounds).unwrap();
        let second = ClassSet::enumerate(&pair, bounds).unwrap();
        prop_assert_eq!(first.dump(), second.dump());
    }

    #[test]
    fn saturated_arities_are_closed(seed in any::<u64>(), size in 1usize..=4) {
        let pair = AlgebraPair::single(seeded(seed, size, 0.1));
        let cs = saturated_classes(&pair, 1);
        let lang = pair.language().clone();
        let reps: Vec<Term> = cs.of_arity(1).iter().map(|c| c.representative.clone()).collect();
        for f in lang.functions() {
            for args in tuples(reps.len(), f.rank) {
                let t = Term::app(f.name.as_str(), args.iter().map(|&i| reps[i as usize].clone()).collect());
                prop_assert!(cs.class_of_arity(&t, 1).unwrap().is_some(), "{} escapes", t);
            }
        }
        // identifying the variables of an arity-2 composite lands in arity 1
        for f in lang.functions().iter().filter(|f| f.rank == 2) {
            let t = Term::app(f.name.as_str(), vec![Term::var(1), Term::var(1)]);
            prop_assert!(cs.class_of_arity(&t, 1).unwrap().is_some());
        }
    }

    #[test]
    fn intersection_law_and_witnesses(seed in any::<u64>(), size in 1usize..=3) {
        let alg = seeded(seed, size, 0.15);
        let cs = ClassSet::enumerate(&AlgebraPair::single(alg.clone()), Bounds::new(2, 2, 2_000)).unwrap();
        let n = size as ElemId;
        for a in 0..n {
            for b in 0..n {
                let left: HashSet<_> = jus_source(&cs, a, b).unwrap().into_iter().collect();
                for c in 0..n {
                    for d in 0..n {
                        let right: HashSet<_> = jus_target(&cs, c, d).unwrap().into_iter().collect();
                        let mut expected: Vec<_> = left.intersection(&right).copied().collect();
                        expected.sort();
                        let set = jus(&cs, a, b, c, d).unwrap();
                        prop_assert_eq!(&set.members, &expected);
                        for &j in &set.members {
                            let w = witnesses(&cs, j, a, b, c, d);
                            prop_assert!(!w.source.is_empty() && !w.target.is_empty());
                            let (s, t) = (&cs.class(j.s).representative, &cs.class(j.t).representative);
                            for e in &w.source {
                                prop_assert_eq!(eval_term(&alg, s, e).unwrap(), Some(a));
                                prop_assert_eq!(eval_term(&alg, t, e).unwrap(), Some(b));
                            }
                            for e in &w.target {
                                prop_assert_eq!(eval_term(&alg, s, e).unwrap(), Some(c));
                                prop_assert_eq!(eval_term(&alg, t, e).unwrap(), Some(d));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_members_never_change_inclusions(seed in any::<u64>(), size in 1usize..=4) {
        let cs = saturated_classes(&AlgebraPair::single(seeded(seed, size, 0.1)), 1);
        let n = size as ElemId;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let table = JusTable::compute(&cs, a, b, c).unwrap();
                    let mut trivial = HashSet::new();
                    for (i, &j) in table.pairs.iter().enumerate() {
                        if is_strictly_trivial(&cs, j) {
                            trivial.insert(i);
                        }
                    }
                    let stripped: Vec<HashSet<usize>> = table
                        .members
                        .iter()
                        .map(|m| m.ones().filter(|i| !trivial.contains(i)).collect())
                        .collect();
                    for x in 0..table.members.len() {
                        for y in 0..table.members.len() {
                            prop_assert_eq!(
                                table.members[x].is_subset(&table.members[y]),
                                stripped[x].is_subset(&stripped[y])
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn axiom_audits_are_consistent(seed in any::<u64>(), size in 1usize..=3) {
        let cs = saturated_classes(&AlgebraPair::single(seeded(seed, size, 0.1)), 1);
        let reports = check_all(&cs).unwrap();
        prop_assert!(consistent(&reports));
        for r in &reports {
            if matches!(r.axiom, Axiom::Determinism | Axiom::Reflexivity) {
                prop_assert_eq!(r.verdict, Verdict::HoldsExhaustively);
            }
            prop_assert_eq!(r.verdict == Verdict::Fails, !r.counterexamples.is_empty());
            for cex in &r.counterexamples {
                let [a, b, c, d] = cex.premise.tuple;
                prop_assert_eq!(holds(&cs, a, b, c, d).unwrap().holds, cex.premise.holds);
                if let Some(concl) = &cex.conclusion {
                    let [a, b, c, d] = concl.tuple;
                    prop_assert!(cex.premise.holds);
                    prop_assert!(!holds(&cs, a, b, c, d).unwrap().holds);
                }
            }
        }
    }
}

fn difference_classes() -> &'static ClassSet {
    static CS: OnceLock<ClassSet> = OnceLock::new();
    CS.get_or_init(|| classes(&registry(), "intI20", 1, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn difference_proportions_hold(a in -20i64..=20, b in -20i64..=20, c in -20i64..=20) {
        let d = c + b - a;
        prop_assume!((-20..=20).contains(&d));
        let cs = difference_classes();
        let alg = cs.pair().source();
        let e = |x: i64| alg.element(&x.to_string()).unwrap();
        prop_assert!(holds(cs, e(a), e(b), e(c), e(d)).unwrap().holds);
    }
}

fn brute_sy_numbers(t: [i64; 4], range: i64) -> bool {
    let r = -range..=range;
    r.clone().any(|a1| {
        r.clone().any(|a2| {
            a1 + a2 == t[0]
                && r.clone().any(|d1| {
                    d1 + a2 == t[2] && r.clone().any(|d2| a1 + d2 == t[1] && d1 + d2 == t[3])
                })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn sy_numbers_is_the_linear_law(t in proptest::array::uniform4(-5i64..=5)) {
        let [a, b, c, d] = t;
        let v = sy_numbers(a, b, c, d, 5).unwrap();
        prop_assert_eq!(v.holds, a + d == b + c);
        prop_assert_eq!(v.holds, brute_sy_numbers(t, 10));
        if let Some(w) = v.witness {
            prop_assert!(recomposes(&w, t));
        }
    }

    #[test]
    fn set_models_match_their_definitions(u in 1usize..=3, raw in proptest::array::uniform4(0u64..8)) {
        let mask = (1u64 << u) - 1;
        let [a, b, c, d] = raw.map(|x| x & mask);
        let subsets = 0..=mask;

        let sy = sy_sets(u, a, b, c, d).unwrap();
        let sy_brute = subsets.clone().any(|a1| subsets.clone().any(|a2| {
            a1 | a2 == a && subsets.clone().any(|d1| subsets.clone().any(|d2| {
                [a1 | d2, d1 | a2, d1 | d2] == [b, c, d]
            }))
        }));
        prop_assert_eq!(sy.holds, sy_brute);

        let mbd = mbd_sets(u, a, b, c, d).unwrap();
        let mbd_brute = subsets.clone().any(|e| subsets.clone().any(|f| {
            (a & !e) | f == b && (c & !e) | f == d
        }));
        prop_assert_eq!(mbd.holds, mbd_brute);

        let tuple = [a, b, c, d].map(|x| x as i64);
        for w in [sy.witness, mbd.witness].into_iter().flatten() {
            prop_assert!(recomposes(&w, tuple));
        }
    }
}

#[test]
fn all_empty_sets_make_every_element_a_solution() {
    let reg = registry();
    let cs = classes(&reg, "bareABD", 1, 3);
    let alg = cs.pair().source();
    let (a, b, c) = (elem(alg, "a"), elem(alg, "b"), elem(alg, "a"));
    let r = solve(&cs, a, b, c).unwrap();
    assert!(r.table.members.iter().all(|m| m.count_ones(..) == 0));
    assert_eq!(r.solutions, (0..alg.size() as ElemId).collect::<Vec<_>>());
}

#[test]
fn named_elements_are_their_own_unique_solution() {
    let reg = registry();
    let pair = reg.pair("powA").unwrap();
    let cs = saturated_classes(&pair, 2);
    let n = pair.source().size() as ElemId;
    for a in 0..n {
        for b in 0..n {
            assert_eq!(solve(&cs, a, b, a).unwrap().solutions, vec![b], "({a},{b})");
        }
    }
}

#[test]
fn powerset_tables_obey_de_morgan() {
    let reg = registry();
    let alg = reg.get("powAB").unwrap();
    let lang = alg.language();
    let (cap, cup, comp) = (
        lang.function_index("cap").unwrap(),
        lang.function_index("cup").unwrap(),
        lang.function_index("comp").unwrap(),
    );
    let n = alg.size() as ElemId;
    for x in 0..n {
        for y in 0..n {
            let (cx, cy) = (alg.apply(comp, &[x]), alg.apply(comp, &[y]));
            assert_eq!(
                alg.apply(comp, &[alg.apply(cap, &[x, y])]),
                alg.apply(cup, &[cx, cy])
            );
            assert_eq!(
                alg.apply(comp, &[alg.apply(cup, &[x, y])]),
                alg.apply(cap, &[cx, cy])
            );
        }
    }
}
