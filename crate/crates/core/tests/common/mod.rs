#![allow(dead_code)]

use std::sync::Arc;

use proportia_core::algebra::{AlgebraPair, ElemId, PartialAlgebra};
use proportia_core::builtins::{builtin, Params};
use proportia_core::clone::{Bounds, ClassSet};
use proportia_core::specfile::{bundled_registry, Registry};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn registry() -> Registry {
    bundled_registry()
}

pub fn classes(reg: &Registry, pair: &str, k: usize, d: usize) -> ClassSet {
    ClassSet::enumerate(&reg.pair(pair).unwrap(), Bounds::new(k, d, 50_000)).unwrap()
}

pub fn elem(alg: &PartialAlgebra, literal: &str) -> ElemId {
    alg.element(literal).unwrap()
}

pub fn literals(alg: &PartialAlgebra, ids: &[ElemId]) -> Vec<String> {
    ids.iter().map(|&e| alg.literal(e).to_string()).collect()
}

pub fn params(items: &[(&str, &str)]) -> Params {
    items
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Shape of a random table algebra.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub size: usize,
    pub binary: bool,
    pub unary: bool,
    pub constant: bool,
    /// Probability of an undefined row.
    pub undefined: f64,
}

impl Shape {
    pub fn random(rng: &mut ChaCha8Rng, size: usize) -> Shape {
        let binary = rng.gen_bool(0.8);
        Shape {
            size,
            binary,
            unary: !binary || rng.gen_bool(0.4),
            constant: rng.gen_bool(0.5),
            undefined: if rng.gen_bool(0.3) { 0.15 } else { 0.0 },
        }
    }
}

/// A table algebra on `e0..e{n-1}` with `f/2`, `g/1` and `k` as the shape
/// asks.
pub fn random_algebra(rng: &mut ChaCha8Rng, name: &str, shape: Shape) -> Arc<PartialAlgebra> {
    let n = shape.size;
    let elems: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let value = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(shape.undefined) {
            "undef".to_string()
        } else {
            elems[rng.gen_range(0..n)].clone()
        }
    };
    let mut fns = Vec::new();
    let mut rows = Vec::new();
    if shape.binary {
        fns.push("f/2");
        for x in &elems {
            for y in &elems {
                rows.push(format!("f({x},{y})={}", value(rng)));
            }
        }
    }
    if shape.unary {
        fns.push("g/1");
        for x in &elems {
            rows.push(format!("g({x})={}", value(rng)));
        }
    }
    let mut p = params(&[
        ("elems", &elems.join(",")),
        ("fns", &fns.join(",")),
        ("rows", &rows.join(";")),
    ]);
    if shape.constant {
        p.insert("consts".into(), format!("k:{}", elems[rng.gen_range(0..n)]));
    }
    Arc::new(builtin("table", name, &p).unwrap())
}

/// Enumerates with growing depth until every arity saturates.
pub fn saturated_classes(pair: &AlgebraPair, k: usize) -> ClassSet {
    for d in [4, 8, 16, 32] {
        let cs = ClassSet::enumerate(pair, Bounds::new(k, d, 200_000)).unwrap();
        if cs.fully_saturated() {
            return cs;
        }
    }
    panic!("no saturation within depth 32");
}
