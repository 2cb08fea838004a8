//! Justification sets over a [`ClassSet`].
//!
//! A justification is an ordered pair `s -> t` of same-arity term classes.
//! It justifies `a:b::c:d` when some source tuple maps to `(a, b)` under
//! `(s, t)` and some target tuple maps to `(c, d)`. Undefined entries never
//! witness anything.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::algebra::{ElemId, UNDEF};
use crate::clone::{Bounds, ClassId, ClassSet};
use crate::error::{Error, Result};
use crate::solver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Justification {
    pub s: ClassId,
    pub t: ClassId,
}

impl Justification {
    pub fn new(s: ClassId, t: ClassId) -> Self {
        Justification { s, t }
    }

    pub fn render(&self, cs: &ClassSet) -> String {
        format!(
            "{} -> {}",
            cs.class(self.s).representative_text(),
            cs.class(self.t).representative_text()
        )
    }
}

/// `Jus(a:b::c:d)` for one fully specified proportion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JusSet {
    pub a: ElemId,
    pub b: ElemId,
    pub c: ElemId,
    pub d: ElemId,
    pub members: Vec<Justification>,
    pub bounds: Bounds,
    pub saturated: Vec<bool>,
}

impl JusSet {
    pub fn contains(&self, j: &Justification) -> bool {
        self.members.binary_search(j).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

/// Witness tuples of one justification for one proportion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    pub source: Vec<Vec<ElemId>>,
    pub target: Vec<Vec<ElemId>>,
}

fn check_elements(cs: &ClassSet, src: &[ElemId], tgt: &[ElemId]) -> Result<()> {
    let pair = cs.pair();
    let bad = |alg: &crate::algebra::PartialAlgebra, e: ElemId| Error::ElementNotInCarrier {
        literal: format!("#{e}"),
        algebra: alg.name().to_string(),
    };
    if let Some(&e) = src.iter().find(|&&e| e as usize >= pair.source().size()) {
        return Err(bad(pair.source(), e));
    }
    if let Some(&e) = tgt.iter().find(|&&e| e as usize >= pair.target().size()) {
        return Err(bad(pair.target(), e));
    }
    Ok(())
}

fn positions(table: &[ElemId], value: ElemId) -> Vec<usize> {
    table
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == value)
        .map(|(i, _)| i)
        .collect()
}

/// `Jus(a:b::c:d)` by exhaustive scan over equal-arity class pairs.
pub fn jus(cs: &ClassSet, a: ElemId, b: ElemId, c: ElemId, d: ElemId) -> Result<JusSet> {
    check_elements(cs, &[a, b], &[c, d])?;
    let mut members = Vec::new();
    for k in 0..=cs.max_arity() {
        for s in cs.arity_range(k) {
            let ea = positions(cs.source_table(s), a);
            let eb = positions(cs.target_table(s), c);
            if ea.is_empty() || eb.is_empty() {
                continue;
            }
            for t in cs.arity_range(k) {
                let ts = cs.source_table(t);
                let tt = cs.target_table(t);
                if ea.iter().any(|&e| ts[e] == b) && eb.iter().any(|&e| tt[e] == d) {
                    members.push(Justification::new(s, t));
                }
            }
        }
    }
    Ok(JusSet {
        a,
        b,
        c,
        d,
        members,
        bounds: cs.bounds(),
        saturated: cs.saturated().to_vec(),
    })
}

/// `Jus_A(a, b)`: pairs with a source witness.
pub fn jus_source(cs: &ClassSet, a: ElemId, b: ElemId) -> Result<Vec<Justification>> {
    check_elements(cs, &[a, b], &[])?;
    Ok(one_sided(cs, a, b, |cs, id| cs.source_table(id)))
}

/// `Jus_B(c, d)`: pairs with a target witness.
pub fn jus_target(cs: &ClassSet, c: ElemId, d: ElemId) -> Result<Vec<Justification>> {
    check_elements(cs, &[], &[c, d])?;
    Ok(one_sided(cs, c, d, |cs, id| cs.target_table(id)))
}

fn one_sided(
    cs: &ClassSet,
    x: ElemId,
    y: ElemId,
    table: impl Fn(&ClassSet, ClassId) -> &[ElemId],
) -> Vec<Justification> {
    let mut out = Vec::new();
    for k in 0..=cs.max_arity() {
        for s in cs.arity_range(k) {
            for t in cs.arity_range(k) {
                let (st, tt) = (table(cs, s), table(cs, t));
                if st.iter().zip(tt).any(|(&u, &v)| u == x && v == y) {
                    out.push(Justification::new(s, t));
                }
            }
        }
    }
    out
}

pub fn witnesses(
    cs: &ClassSet,
    j: Justification,
    a: ElemId,
    b: ElemId,
    c: ElemId,
    d: ElemId,
) -> Witnesses {
    let k = cs.class(j.s).arity;
    let collect = |st: &[ElemId], tt: &[ElemId], x: ElemId, y: ElemId, source: bool| {
        st.iter()
            .zip(tt)
            .enumerate()
            .filter(|(_, (&u, &v))| u == x && v == y)
            .map(|(row, _)| {
                if source {
                    cs.source_tuple(k, row)
                } else {
                    cs.target_tuple(k, row)
                }
            })
            .collect::<Vec<_>>()
    };
    Witnesses {
        source: collect(cs.source_table(j.s), cs.source_table(j.t), a, b, true),
        target: collect(cs.target_table(j.s), cs.target_table(j.t), c, d, false),
    }
}

/// Justification sets of `a:b::c:d` for every target element `d` at once.
///
/// `pairs` lists every justification that occurs for at least one `d`, in
/// order of arity, then `s`, then `t`; `members[d]` marks those in
/// `Jus(a:b::c:d)`.
#[derive(Debug, Clone)]
pub struct JusTable {
    pub a: ElemId,
    pub b: ElemId,
    pub c: ElemId,
    pub pairs: Vec<Justification>,
    pub members: Vec<FixedBitSet>,
}

impl JusTable {
    pub fn compute(cs: &ClassSet, a: ElemId, b: ElemId, c: ElemId) -> Result<JusTable> {
        Self::compute_filtered(cs, a, b, c, |_| true)
    }

    /// Like [`JusTable::compute`] but drops every justification for which
    /// `keep` returns false.
    pub fn compute_filtered(
        cs: &ClassSet,
        a: ElemId,
        b: ElemId,
        c: ElemId,
        keep: impl Fn(Justification) -> bool,
    ) -> Result<JusTable> {
        check_elements(cs, &[a, b], &[c])?;
        let n = cs.pair().target().size();
        let mut pairs = Vec::new();
        let mut marks: Vec<(usize, ElemId)> = Vec::new();
        let mut ds: Vec<ElemId> = Vec::new();
        for k in 0..=cs.max_arity() {
            for s in cs.arity_range(k) {
                let ea = positions(cs.source_table(s), a);
                if ea.is_empty() {
                    continue;
                }
                let eb = positions(cs.target_table(s), c);
                if eb.is_empty() {
                    continue;
                }
                for t in cs.arity_range(k) {
                    let ts = cs.source_table(t);
                    if !ea.iter().any(|&e| ts[e] == b) {
                        continue;
                    }
                    let j = Justification::new(s, t);
                    if !keep(j) {
                        continue;
                    }
                    let tt = cs.target_table(t);
                    ds.clear();
                    ds.extend(eb.iter().map(|&e| tt[e]).filter(|&v| v != UNDEF));
                    if ds.is_empty() {
                        continue;
                    }
                    ds.sort_unstable();
                    ds.dedup();
                    let idx = pairs.len();
                    pairs.push(j);
                    marks.extend(ds.iter().map(|&d| (idx, d)));
                }
            }
        }
        let mut members = vec![FixedBitSet::with_capacity(pairs.len()); n];
        for (idx, d) in marks {
            members[d as usize].insert(idx);
        }
        Ok(JusTable {
            a,
            b,
            c,
            pairs,
            members,
        })
    }

    pub fn jus_set(&self, cs: &ClassSet, d: ElemId) -> JusSet {
        let mut members: Vec<Justification> = self.members[d as usize]
            .ones()
            .map(|i| self.pairs[i])
            .collect();
        members.sort_unstable();
        JusSet {
            a: self.a,
            b: self.b,
            c: self.c,
            d,
            members,
            bounds: cs.bounds(),
            saturated: cs.saturated().to_vec(),
        }
    }

    /// Target elements `d` whose justification set contains `j`.
    pub fn justified(&self, j: Justification) -> Vec<ElemId> {
        match self.pairs.iter().position(|&p| p == j) {
            None => Vec::new(),
            Some(idx) => (0..self.members.len())
                .filter(|&d| self.members[d].contains(idx))
                .map(|d| d as ElemId)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Triviality {
    pub trivial: bool,
    /// Some pairs were left uncovered only where tables are undefined.
    pub partial: bool,
    pub uncovered_source: usize,
    pub uncovered_target: usize,
}

fn coverage(st: &[ElemId], tt: &[ElemId], n: usize) -> (usize, usize) {
    let mut covered = FixedBitSet::with_capacity(n * n);
    let mut undefined = 0;
    for (&u, &v) in st.iter().zip(tt) {
        if u == UNDEF || v == UNDEF {
            undefined += 1;
        } else {
            covered.insert(u as usize * n + v as usize);
        }
    }
    (n * n - covered.count_ones(..), undefined)
}

/// Whether `j` justifies every `a:b::c:d` over the pair.
///
/// On partial algebras a justification whose uncovered pairs on each side
/// could all be accounted for by its undefined rows is reported trivial with
/// the `partial` qualifier.
pub fn is_trivial(cs: &ClassSet, j: Justification) -> Triviality {
    let ns = cs.pair().source().size();
    let nt = cs.pair().target().size();
    let (us, und_s) = coverage(cs.source_table(j.s), cs.source_table(j.t), ns);
    let (ut, und_t) = coverage(cs.target_table(j.s), cs.target_table(j.t), nt);
    if us == 0 && ut == 0 {
        return Triviality {
            trivial: true,
            partial: false,
            uncovered_source: 0,
            uncovered_target: 0,
        };
    }
    Triviality {
        trivial: us <= und_s && ut <= und_t,
        partial: true,
        uncovered_source: us,
        uncovered_target: ut,
    }
}

/// Strictly trivial (full coverage, no qualifier).
pub fn is_strictly_trivial(cs: &ClassSet, j: Justification) -> bool {
    let t = is_trivial(cs, j);
    t.trivial && !t.partial
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Characteristic {
    YesByInjectivity,
    YesByExhaustion,
    No,
    Unknown,
}

/// Classifies `j` as a characteristic justification of `a:b::c:d`.
pub fn is_characteristic(
    cs: &ClassSet,
    j: Justification,
    a: ElemId,
    b: ElemId,
    c: ElemId,
    d: ElemId,
) -> Result<Characteristic> {
    let table = JusTable::compute(cs, a, b, c)?;
    characteristic_in(cs, &table, j, d)
}

pub(crate) fn characteristic_in(
    cs: &ClassSet,
    table: &JusTable,
    j: Justification,
    d: ElemId,
) -> Result<Characteristic> {
    let justified = table.justified(j);
    if !justified.contains(&d) {
        return Err(Error::NotAJustification);
    }
    let hits = cs
        .target_table(j.s)
        .iter()
        .filter(|&&v| v == table.c)
        .count();
    if hits == 1 {
        return Ok(Characteristic::YesByInjectivity);
    }
    let exact = cs.fully_saturated();
    if justified == [d] {
        return Ok(if exact {
            Characteristic::YesByExhaustion
        } else {
            Characteristic::Unknown
        });
    }
    let solutions = solver::maximal(table);
    if justified.iter().any(|x| !solutions.contains(x)) {
        return Ok(if exact {
            Characteristic::No
        } else {
            Characteristic::Unknown
        });
    }
    Ok(Characteristic::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn bare_set_has_no_justifications() {
        let alg = algebra("bare_set", &[("elems", "a,b,d")]);
        let e = |l| alg.element(l).unwrap();
        let unary = classes(&alg, 1, 3, 100);
        assert!(jus(&unary, e("a"), e("b"), e("a"), e("d"))
            .unwrap()
            .is_empty());
        // z1 -> z1 justifies a:a::d:d
        assert!(!jus(&unary, e("a"), e("a"), e("d"), e("d"))
            .unwrap()
            .is_empty());
        // binary projections relate any two elements
        let binary = classes(&alg, 2, 3, 100);
        let set = jus(&binary, e("a"), e("b"), e("a"), e("d")).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.members.iter().all(|&j| is_strictly_trivial(&binary, j)));
    }

    #[test]
    fn boolean_one_zero_inclusion() {
        let alg = algebra("bool_or", &[("consts", "zero:0,one:1")]);
        let cs = classes(&alg, 2, 4, 10_000);
        let j11 = jus(&cs, 1, 0, 1, 1).unwrap();
        let j10 = jus(&cs, 1, 0, 1, 0).unwrap();
        assert!(j11.members.iter().all(|m| j10.contains(m)));
        let one = cs.class_of(&term(&alg, "one")).unwrap().unwrap();
        let zero = cs.class_of(&term(&alg, "zero")).unwrap().unwrap();
        let ground = Justification::new(one, zero);
        assert!(j10.contains(&ground));
        assert!(!j11.contains(&ground));
    }

    #[test]
    fn witnesses_match_tables() {
        let alg = algebra("bool_or", &[("consts", "zero:0,one:1")]);
        let cs = classes(&alg, 2, 3, 10_000);
        let set = jus(&cs, 1, 1, 0, 1).unwrap();
        for j in &set.members {
            let w = witnesses(&cs, *j, 1, 1, 0, 1);
            assert!(!w.source.is_empty() && !w.target.is_empty());
        }
    }

    #[test]
    fn rejects_foreign_elements() {
        let alg = algebra("bool_or", &[]);
        let cs = classes(&alg, 1, 2, 100);
        assert!(matches!(
            jus(&cs, 0, 5, 0, 0),
            Err(Error::ElementNotInCarrier { .. })
        ));
    }

    #[test]
    fn identity_is_not_trivial() {
        let alg = algebra("bool_or", &[("consts", "zero:0,one:1")]);
        let cs = classes(&alg, 1, 2, 100);
        let z = cs.class_of(&term(&alg, "z1")).unwrap().unwrap();
        assert!(!is_trivial(&cs, Justification::new(z, z)).trivial);
    }

    #[test]
    fn not_a_justification() {
        let alg = algebra("bare_set", &[("elems", "a,b,d")]);
        let cs = classes(&alg, 1, 2, 100);
        let z = cs.class_of(&term(&alg, "z1")).unwrap().unwrap();
        let e = |l| alg.element(l).unwrap();
        assert_eq!(
            is_characteristic(
                &cs,
                Justification::new(z, z),
                e("a"),
                e("b"),
                e("a"),
                e("d")
            ),
            Err(Error::NotAJustification)
        );
    }
}
