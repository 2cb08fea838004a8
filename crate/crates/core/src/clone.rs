//! Enumeration of term-induced functions over an algebra pair.
//!
//! For every arity `k <= K` the engine seeds the projections `z1..zk` and
//! the constants, then closes under the function symbols level by level
//! (level = term depth). Composition happens on tables, never on ASTs.
//! Two terms land in the same [`TermClass`] iff their source *and* target
//! tables agree entry-wise, undefined entries included.

use std::fmt;
use std::hash::{Hash, Hasher};

use rustc_hash::{FxHashMap, FxHasher};
use serde::Serialize;

use crate::algebra::{
    decode_tuple, table_len, term_table, AlgebraPair, ElemId, PartialAlgebra, UNDEF,
};
use crate::error::{Error, Result};
use crate::lang::Term;

pub const DEFAULT_MAX_ARITY: usize = 2;
pub const DEFAULT_MAX_DEPTH: usize = 4;
pub const DEFAULT_CAP: usize = 50_000;

/// Hard ceiling on stored table entries (both sides, all classes).
pub const MAX_TABLE_ENTRIES: usize = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Bounds {
    pub max_arity: usize,
    pub max_depth: usize,
    /// Maximum number of classes per arity.
    pub cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_arity: DEFAULT_MAX_ARITY,
            max_depth: DEFAULT_MAX_DEPTH,
            cap: DEFAULT_CAP,
        }
    }
}

impl Bounds {
    pub fn new(max_arity: usize, max_depth: usize, cap: usize) -> Self {
        Bounds {
            max_arity,
            max_depth,
            cap,
        }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K={} D={} cap={}",
            self.max_arity, self.max_depth, self.cap
        )
    }
}

pub type ClassId = usize;

#[derive(Debug, Clone)]
pub struct TermClass {
    pub id: ClassId,
    pub arity: usize,
    /// Minimal depth, then minimal printed form.
    pub representative: Term,
    pub depth: usize,
    rep_text: String,
    table: Box<[ElemId]>,
}

impl TermClass {
    pub fn representative_text(&self) -> &str {
        &self.rep_text
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub arity: usize,
    pub message: String,
}

/// Finite approximation of the term-function sets over a pair, per arity.
#[derive(Debug, Clone)]
pub struct ClassSet {
    pair: AlgebraPair,
    bounds: Bounds,
    single: bool,
    classes: Vec<TermClass>,
    /// `by_arity[k]` is the id range of arity-`k` classes.
    by_arity: Vec<std::ops::Range<ClassId>>,
    saturated: Vec<bool>,
    warnings: Vec<Warning>,
    index: FxHashMap<u64, Vec<ClassId>>,
}

fn hash_table(arity: usize, table: &[ElemId]) -> u64 {
    let mut h = FxHasher::default();
    arity.hash(&mut h);
    table.hash(&mut h);
    h.finish()
}

struct Candidate {
    table: Box<[ElemId]>,
    term: Term,
    text: String,
    depth: usize,
}

struct ArityState<'a> {
    pair: &'a AlgebraPair,
    single: bool,
    arity: usize,
    src_len: usize,
    tgt_len: usize,
    found: Vec<Candidate>,
    seen: FxHashMap<u64, Vec<usize>>,
}

impl<'a> ArityState<'a> {
    fn lookup(&self, table: &[ElemId]) -> Option<usize> {
        let h = hash_table(self.arity, table);
        self.seen
            .get(&h)?
            .iter()
            .copied()
            .find(|&i| &*self.found[i].table == table)
    }

    fn insert(&mut self, c: Candidate) {
        let h = hash_table(self.arity, &c.table);
        self.seen.entry(h).or_default().push(self.found.len());
        self.found.push(c);
    }

    fn entries(&self) -> usize {
        if self.single {
            self.src_len
        } else {
            self.src_len + self.tgt_len
        }
    }

    /// Composes `op` pointwise over the tables of `args`.
    fn compose(&self, op: usize, args: &[usize], out: &mut Vec<ElemId>) {
        out.clear();
        let cols: Vec<&[ElemId]> = args.iter().map(|&a| &*self.found[a].table).collect();
        let src_cols: Vec<&[ElemId]> = cols.iter().map(|c| &c[..self.src_len]).collect();
        compose_side(self.pair.source(), op, &src_cols, out);
        if !self.single {
            let tgt_cols: Vec<&[ElemId]> = cols.iter().map(|c| &c[self.src_len..]).collect();
            compose_side(self.pair.target(), op, &tgt_cols, out);
        }
    }
}

fn compose_side(alg: &PartialAlgebra, op: usize, cols: &[&[ElemId]], out: &mut Vec<ElemId>) {
    let rows = &alg.op(op).rows;
    let n = alg.size();
    match cols {
        [x] => out.extend(
            x.iter()
                .map(|&v| if v == UNDEF { UNDEF } else { rows[v as usize] }),
        ),
        [x, y] => out.extend(x.iter().zip(y.iter()).map(|(&u, &v)| {
            if u == UNDEF || v == UNDEF {
                UNDEF
            } else {
                rows[u as usize * n + v as usize]
            }
        })),
        _ => {
            let mut buf = vec![0; cols.len()];
            for row in 0..cols.first().map_or(0, |c| c.len()) {
                for (slot, c) in buf.iter_mut().zip(cols) {
                    *slot = c[row];
                }
                out.push(alg.apply(op, &buf));
            }
        }
    }
}

enum LevelOutcome {
    /// Number of classes added.
    Added(usize),
    CapHit,
}

impl ClassSet {
    pub fn enumerate(pair: &AlgebraPair, bounds: Bounds) -> Result<ClassSet> {
        if bounds.max_depth < 1 {
            return Err(Error::InvalidBounds("max depth must be at least 1".into()));
        }
        let min_cap = pair.source().size().max(pair.target().size());
        if bounds.cap < min_cap {
            return Err(Error::InvalidBounds(format!(
                "cap {} is below the carrier size {min_cap}",
                bounds.cap
            )));
        }
        let single = pair.is_single_domain();
        let mut classes = Vec::new();
        let mut by_arity = Vec::new();
        let mut saturated = Vec::new();
        let mut warnings = Vec::new();
        let mut budget = MAX_TABLE_ENTRIES;

        for arity in 0..=bounds.max_arity {
            let too_big = || Error::InvalidBounds(format!("arity {arity} tables are too large"));
            let src_len = table_len(pair.source().size(), arity).ok_or_else(too_big)?;
            let tgt_len = table_len(pair.target().size(), arity).ok_or_else(too_big)?;
            let mut st = ArityState {
                pair,
                single,
                arity,
                src_len,
                tgt_len,
                found: Vec::new(),
                seen: FxHashMap::default(),
            };
            let (sat, warning) = close_arity(&mut st, bounds, &mut budget);
            if let Some(message) = warning {
                warnings.push(Warning { arity, message });
            }
            saturated.push(sat);

            let mut found = st.found;
            found.sort_by(|a, b| a.depth.cmp(&b.depth).then_with(|| a.text.cmp(&b.text)));
            let start = classes.len();
            for c in found {
                classes.push(TermClass {
                    id: classes.len(),
                    arity,
                    representative: c.term,
                    depth: c.depth,
                    rep_text: c.text,
                    table: c.table,
                });
            }
            by_arity.push(start..classes.len());
        }

        let mut index: FxHashMap<u64, Vec<ClassId>> = FxHashMap::default();
        for c in &classes {
            index
                .entry(hash_table(c.arity, &c.table))
                .or_default()
                .push(c.id);
        }
        Ok(ClassSet {
            pair: pair.clone(),
            bounds,
            single,
            classes,
            by_arity,
            saturated,
            warnings,
            index,
        })
    }

    pub fn pair(&self) -> &AlgebraPair {
        &self.pair
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn classes(&self) -> &[TermClass] {
        &self.classes
    }

    pub fn class(&self, id: ClassId) -> &TermClass {
        &self.classes[id]
    }

    pub fn of_arity(&self, k: usize) -> &[TermClass] {
        self.by_arity
            .get(k)
            .map(|r| &self.classes[r.clone()])
            .unwrap_or(&[])
    }

    pub fn arity_range(&self, k: usize) -> std::ops::Range<ClassId> {
        self.by_arity.get(k).cloned().unwrap_or(0..0)
    }

    pub fn max_arity(&self) -> usize {
        self.bounds.max_arity
    }

    pub fn saturated(&self) -> &[bool] {
        &self.saturated
    }

    pub fn fully_saturated(&self) -> bool {
        self.saturated.iter().all(|&s| s)
    }

    pub fn cap_hit(&self) -> bool {
        !self.warnings.is_empty()
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn source_table(&self, id: ClassId) -> &[ElemId] {
        let c = &self.classes[id];
        let n = self.source_len(c.arity);
        &c.table[..n]
    }

    pub fn target_table(&self, id: ClassId) -> &[ElemId] {
        let c = &self.classes[id];
        if self.single {
            &c.table[..]
        } else {
            let n = self.source_len(c.arity);
            &c.table[n..]
        }
    }

    pub fn source_len(&self, k: usize) -> usize {
        self.pair.source().size().pow(k as u32)
    }

    pub fn target_len(&self, k: usize) -> usize {
        self.pair.target().size().pow(k as u32)
    }

    /// Looks up the class of `t`, evaluated as a function of `z1..zk` with
    /// `k` the largest variable index in `t`, or any larger arity up to `K`.
    pub fn class_of(&self, t: &Term) -> Result<Option<ClassId>> {
        self.class_of_arity(t, t.max_variable() as usize)
    }

    pub fn class_of_arity(&self, t: &Term, k: usize) -> Result<Option<ClassId>> {
        let needed = t.max_variable() as usize;
        if needed > self.bounds.max_arity {
            return Err(Error::UnboundVariable(needed as u32));
        }
        if k < needed || k > self.bounds.max_arity {
            return Err(Error::TermOutOfBounds(t.to_string()));
        }
        let mut table = term_table(self.pair.source(), t, k)?;
        if !self.single {
            table.extend(term_table(self.pair.target(), t, k)?);
        }
        Ok(self.lookup(k, &table))
    }

    fn lookup(&self, k: usize, table: &[ElemId]) -> Option<ClassId> {
        self.index
            .get(&hash_table(k, table))?
            .iter()
            .copied()
            .find(|&id| self.classes[id].arity == k && &*self.classes[id].table == table)
    }

    /// One line per class: arity, representative, source table and target
    /// table in carrier order.
    pub fn dump(&self) -> String {
        let src = self.pair.source();
        let tgt = self.pair.target();
        let mut out = String::new();
        for c in &self.classes {
            let s: Vec<&str> = self
                .source_table(c.id)
                .iter()
                .map(|&v| src.literal(v))
                .collect();
            let t: Vec<&str> = self
                .target_table(c.id)
                .iter()
                .map(|&v| tgt.literal(v))
                .collect();
            out.push_str(&format!(
                "{}\t{}\t[{}]\t[{}]\n",
                c.arity,
                c.rep_text,
                s.join(" "),
                t.join(" ")
            ));
        }
        out
    }

    /// All arity-`k` assignments of the source carrier, in table order.
    pub fn source_tuple(&self, k: usize, row: usize) -> Vec<ElemId> {
        decode_tuple(row, self.pair.source().size(), k)
    }

    pub fn target_tuple(&self, k: usize, row: usize) -> Vec<ElemId> {
        decode_tuple(row, self.pair.target().size(), k)
    }
}

fn seed(st: &mut ArityState<'_>) {
    let pair = st.pair;
    let lang = pair.language();
    let (ns, nt) = (pair.source().size(), pair.target().size());
    for var in 1..=st.arity {
        let mut table: Vec<ElemId> = (0..st.src_len)
            .map(|row| decode_tuple(row, ns, st.arity)[var - 1])
            .collect();
        if !st.single {
            table.extend((0..st.tgt_len).map(|row| decode_tuple(row, nt, st.arity)[var - 1]));
        }
        push_if_new(st, table, Term::Var(var as u32), 0);
    }
    for (ci, name) in lang.constants().iter().enumerate() {
        let mut table = vec![pair.source().constant(ci); st.src_len];
        if !st.single {
            table.extend(std::iter::repeat_n(pair.target().constant(ci), st.tgt_len));
        }
        push_if_new(st, table, Term::Const(name.clone()), 0);
    }
}

fn push_if_new(st: &mut ArityState<'_>, table: Vec<ElemId>, term: Term, depth: usize) {
    let text = term.to_string();
    match st.lookup(&table) {
        Some(i) => {
            let c = &mut st.found[i];
            if c.depth == depth && text < c.text {
                c.term = term;
                c.text = text;
            }
        }
        None => st.insert(Candidate {
            table: table.into_boxed_slice(),
            term,
            text,
            depth,
        }),
    }
}

/// Runs seeding and up to `max_depth` levels, then a probe level.
/// Returns the saturation flag and an optional cap warning.
fn close_arity(
    st: &mut ArityState<'_>,
    bounds: Bounds,
    budget: &mut usize,
) -> (bool, Option<String>) {
    seed(st);
    let per_class = st.entries().max(1);
    let cap_for_arity = bounds.cap.min(*budget / per_class);
    if st.found.len() > cap_for_arity {
        st.found.truncate(cap_for_arity);
        return (
            false,
            Some(format!(
                "cap of {cap_for_arity} classes reached while seeding"
            )),
        );
    }
    let mut frontier_start = 0;
    for level in 1..=bounds.max_depth {
        let before = st.found.len();
        match run_level(st, level, frontier_start, cap_for_arity, false) {
            LevelOutcome::CapHit => {
                *budget = budget.saturating_sub(st.found.len() * per_class);
                return (
                    false,
                    Some(format!(
                        "cap of {cap_for_arity} classes reached at depth {level}"
                    )),
                );
            }
            LevelOutcome::Added(0) => {
                *budget = budget.saturating_sub(st.found.len() * per_class);
                return (true, None);
            }
            LevelOutcome::Added(_) => frontier_start = before,
        }
    }
    *budget = budget.saturating_sub(st.found.len() * per_class);
    // One more level without storing anything: if it would add nothing, the
    // set is closed.
    let closed = matches!(
        run_level(st, bounds.max_depth + 1, frontier_start, usize::MAX, true),
        LevelOutcome::Added(0)
    );
    (closed, None)
}

/// Applies every function symbol to every argument tuple drawn from classes
/// found so far that uses at least one class of depth `level - 1`.
fn run_level(
    st: &mut ArityState<'_>,
    level: usize,
    frontier_start: usize,
    cap: usize,
    probe: bool,
) -> LevelOutcome {
    let old_len = st.found.len();
    if frontier_start >= old_len {
        return LevelOutcome::Added(0);
    }
    let lang = st.pair.language().clone();
    let mut out = Vec::with_capacity(st.entries());
    let mut added = 0;
    for (op, sym) in lang.functions().iter().enumerate() {
        let rank = sym.rank;
        let mut args = vec![0usize; rank];
        'tuples: loop {
            if args.iter().any(|&a| a >= frontier_start) {
                st.compose(op, &args, &mut out);
                let known = st.lookup(&out);
                match known {
                    Some(i) if i < old_len => {}
                    Some(i) => {
                        // Same level duplicate: keep the smaller print.
                        if print_less(&sym.name, &args, &st.found, &st.found[i].text) {
                            let term = Term::App(
                                sym.name.clone(),
                                args.iter().map(|&a| st.found[a].term.clone()).collect(),
                            );
                            st.found[i].text = term.to_string();
                            st.found[i].term = term;
                        }
                    }
                    None => {
                        if probe {
                            return LevelOutcome::Added(1);
                        }
                        if st.found.len() >= cap {
                            return LevelOutcome::CapHit;
                        }
                        let term = Term::App(
                            sym.name.clone(),
                            args.iter().map(|&a| st.found[a].term.clone()).collect(),
                        );
                        let text = term.to_string();
                        st.insert(Candidate {
                            table: out.clone().into_boxed_slice(),
                            term,
                            text,
                            depth: level,
                        });
                        added += 1;
                    }
                }
            }
            // odometer over [0, old_len)^rank
            for slot in (0..rank).rev() {
                args[slot] += 1;
                if args[slot] < old_len {
                    continue 'tuples;
                }
                args[slot] = 0;
            }
            break;
        }
    }
    LevelOutcome::Added(added)
}

/// Whether the print of `sym(args...)` sorts before `other`, without
/// building it.
fn print_less(sym: &str, args: &[usize], found: &[Candidate], other: &str) -> bool {
    let mut pieces: Vec<&[u8]> = Vec::with_capacity(2 * args.len() + 2);
    pieces.push(sym.as_bytes());
    for (i, &a) in args.iter().enumerate() {
        pieces.push(if i == 0 { b"(" } else { b"," });
        pieces.push(found[a].text.as_bytes());
    }
    pieces.push(b")");
    let mine = pieces.iter().flat_map(|p| p.iter());
    mine.cmp(other.as_bytes().iter()) == std::cmp::Ordering::Less
}

/// Checks a candidate table against `UNDEF` entries; used by callers that
/// need to know whether a class is total.
pub fn is_total(table: &[ElemId]) -> bool {
    !table.contains(&UNDEF)
}
