//! Functional solutions and characteristic justifications on concrete
//! structures.

mod common;

use std::sync::Arc;

use common::*;
use proportia_core::algebra::AlgebraPair;
use proportia_core::builtins::builtin;
use proportia_core::clone::{Bounds, ClassSet};
use proportia_core::justification::{is_characteristic, jus, Characteristic, Justification};
use proportia_core::lang::parse_term;
use proportia_core::solver::holds;

fn term_class(cs: &ClassSet, text: &str) -> usize {
    let t = parse_term(text, cs.pair().language()).unwrap();
    cs.class_of(&t)
        .unwrap()
        .unwrap_or_else(|| panic!("{text} not enumerated"))
}

#[test]
fn functional_solutions_and_characteristic_rewrites() {
    let reg = registry();
    let cs = classes(&reg, "setsAB,natAdd1", 1, 3);
    let t = parse_term("o(z1,c)", cs.pair().language()).unwrap();
    let (src, tgt) = (cs.pair().source(), cs.pair().target());
    let f = proportia_core::solver::functional_solution(&cs, &t, elem(src, "{a}"), elem(tgt, "1"))
        .unwrap();
    assert_eq!((src.literal(f.b), tgt.literal(f.d)), ("{a,b}", "2"));
    assert!(holds(&cs, f.a, f.b, f.c, f.d).unwrap().holds);

    let cs = classes(&reg, "intI99", 1, 2);
    let alg = cs.pair().source();
    let t = parse_term("mul(c10,mul(z1,z1))", alg.language()).unwrap();
    let f = proportia_core::solver::functional_solution(&cs, &t, elem(alg, "0"), elem(alg, "2"))
        .unwrap();
    assert_eq!((alg.literal(f.b), alg.literal(f.d)), ("0", "40"));

    let params = params(&[
        ("interval", "-3000..3000"),
        ("ops", "add,mul"),
        ("consts", "five:5,thousand:1000,threethousand:3000"),
    ]);
    let big = Arc::new(builtin("int_interval", "intK", &params).unwrap());
    let cs =
        ClassSet::enumerate(&AlgebraPair::single(big.clone()), Bounds::new(1, 2, 50_000)).unwrap();
    let e = |l| elem(&big, l);
    let j = Justification::new(
        term_class(&cs, "add(z1,five)"),
        term_class(&cs, "add(mul(thousand,z1),threethousand)"),
    );
    let set = jus(&cs, e("2"), e("0"), e("3"), e("1000")).unwrap();
    assert!(set.contains(&j));
    assert_eq!(
        is_characteristic(&cs, j, e("2"), e("0"), e("3"), e("1000")),
        Ok(Characteristic::YesByInjectivity)
    );
}
