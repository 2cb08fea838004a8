//! Finite, possibly partial algebras and pairs of them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::{Language, Term};

/// Index of an element in a carrier.
pub type ElemId = u16;

/// Marker for an undefined entry in an operation or term table.
pub const UNDEF: ElemId = ElemId::MAX;

/// Largest carrier we can index with [`ElemId`] while keeping [`UNDEF`] free.
pub const MAX_CARRIER: usize = ElemId::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Element {
    Int(i64),
    /// Bitmask over the owning powerset's universe.
    Set(u64),
    Word(String),
    Atom(String),
}

/// How element literals are read and printed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Codec {
    Int,
    Set { universe: Vec<String> },
    Word,
    Atom,
}

pub const EMPTY_WORD: &str = "ε";

impl Codec {
    pub fn print(&self, e: &Element) -> String {
        match (self, e) {
            (Codec::Set { universe }, Element::Set(mask)) => {
                let items: Vec<&str> = universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, u)| u.as_str())
                    .collect();
                format!("{{{}}}", items.join(","))
            }
            (_, Element::Int(i)) => i.to_string(),
            (_, Element::Word(w)) if w.is_empty() => EMPTY_WORD.to_string(),
            (_, Element::Word(w)) => w.clone(),
            (_, Element::Atom(a)) => a.clone(),
            (_, Element::Set(mask)) => format!("#{mask}"),
        }
    }

    /// Reads a literal into an element value. Membership in a carrier is
    /// checked by the algebra.
    pub fn read(&self, literal: &str) -> Option<Element> {
        let literal = literal.trim();
        match self {
            Codec::Int => literal.parse().ok().map(Element::Int),
            Codec::Set { universe } => {
                if literal == "∅" {
                    return Some(Element::Set(0));
                }
                let inner = literal.strip_prefix('{')?.strip_suffix('}')?.trim();
                let mut mask = 0u64;
                if !inner.is_empty() {
                    for item in inner.split(',') {
                        let i = universe.iter().position(|u| u == item.trim())?;
                        mask |= 1 << i;
                    }
                }
                Some(Element::Set(mask))
            }
            Codec::Word => {
                if literal == EMPTY_WORD || literal == "\"\"" {
                    Some(Element::Word(String::new()))
                } else {
                    Some(Element::Word(literal.to_string()))
                }
            }
            Codec::Atom => Some(Element::Atom(literal.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    pub rank: usize,
    /// `carrier^rank` entries in row-major order (first argument most
    /// significant); [`UNDEF`] marks undefined rows.
    pub rows: Vec<ElemId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAlgebra {
    name: String,
    kind: String,
    language: Language,
    codec: Codec,
    elements: Vec<Element>,
    literals: Vec<String>,
    by_value: HashMap<Element, ElemId>,
    /// Aligned with `language.functions()`.
    ops: Vec<OpTable>,
    /// Aligned with `language.constants()`.
    consts: Vec<ElemId>,
}

impl PartialAlgebra {
    /// Builds and validates an algebra. `ops` and `consts` may be listed in
    /// any order; each symbol of `language` must appear exactly once.
    pub fn new(
        name: impl Into<String>,
        kind: impl Into<String>,
        language: Language,
        codec: Codec,
        elements: Vec<Element>,
        ops: Vec<(String, Vec<ElemId>)>,
        consts: Vec<(String, ElemId)>,
    ) -> Result<Self> {
        let name = name.into();
        let kind = kind.into();
        let bad = |message: String| Error::BadParams {
            kind: kind.clone(),
            message,
        };
        if elements.is_empty() {
            return Err(bad("carrier is empty".into()));
        }
        if elements.len() >= MAX_CARRIER {
            return Err(bad(format!("carrier has {} elements", elements.len())));
        }
        let n = elements.len();
        let mut by_value = HashMap::with_capacity(n);
        let mut literals = Vec::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if by_value.insert(e.clone(), i as ElemId).is_some() {
                return Err(bad(format!("duplicate element {}", codec.print(e))));
            }
            literals.push(codec.print(e));
        }
        {
            let mut seen = std::collections::HashSet::new();
            if let Some(dup) = literals.iter().find(|l| !seen.insert(l.as_str())) {
                return Err(bad(format!("duplicate literal {dup}")));
            }
        }

        let mut op_tables: Vec<Option<OpTable>> = vec![None; language.functions().len()];
        for (sym, rows) in ops {
            let idx = language
                .function_index(&sym)
                .ok_or_else(|| bad(format!("operation `{sym}` is not in the language")))?;
            let rank = language.functions()[idx].rank;
            let expected = n
                .checked_pow(rank as u32)
                .ok_or_else(|| bad(format!("table for `{sym}` is too large")))?;
            if rows.len() != expected {
                return Err(bad(format!(
                    "table for `{sym}` has {} rows, expected {expected}",
                    rows.len()
                )));
            }
            if let Some(v) = rows.iter().find(|&&v| v != UNDEF && v as usize >= n) {
                return Err(bad(format!("table for `{sym}` mentions element #{v}")));
            }
            if op_tables[idx].replace(OpTable { rank, rows }).is_some() {
                return Err(bad(format!("operation `{sym}` given twice")));
            }
        }
        let ops: Vec<OpTable> = op_tables
            .into_iter()
            .zip(language.functions())
            .map(|(t, f)| t.ok_or_else(|| bad(format!("operation `{}` has no table", f.name))))
            .collect::<Result<_>>()?;

        let mut const_vals: Vec<Option<ElemId>> = vec![None; language.constants().len()];
        for (sym, v) in consts {
            let idx = language
                .constant_index(&sym)
                .ok_or_else(|| bad(format!("constant `{sym}` is not in the language")))?;
            if v as usize >= n {
                return Err(bad(format!("constant `{sym}` is outside the carrier")));
            }
            if const_vals[idx].replace(v).is_some() {
                return Err(bad(format!("constant `{sym}` given twice")));
            }
        }
        let consts = const_vals
            .into_iter()
            .zip(language.constants())
            .map(|(v, c)| v.ok_or_else(|| bad(format!("constant `{c}` is not interpreted"))))
            .collect::<Result<_>>()?;

        Ok(PartialAlgebra {
            name,
            kind,
            language,
            codec,
            elements,
            literals,
            by_value,
            ops,
            consts,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn language(&self) -> &Language {
        &self.language
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn value(&self, e: ElemId) -> &Element {
        &self.elements[e as usize]
    }

    pub fn literal(&self, e: ElemId) -> &str {
        if e == UNDEF {
            "⊥"
        } else {
            &self.literals[e as usize]
        }
    }

    pub fn element(&self, literal: &str) -> Result<ElemId> {
        self.codec
            .read(literal)
            .and_then(|v| self.by_value.get(&v).copied())
            .ok_or_else(|| Error::ElementNotInCarrier {
                literal: literal.to_string(),
                algebra: self.name.clone(),
            })
    }

    pub fn element_of(&self, value: &Element) -> Option<ElemId> {
        self.by_value.get(value).copied()
    }

    pub fn op(&self, index: usize) -> &OpTable {
        &self.ops[index]
    }

    pub fn ops(&self) -> &[OpTable] {
        &self.ops
    }

    pub fn constant(&self, index: usize) -> ElemId {
        self.consts[index]
    }

    pub fn constant_named(&self, name: &str) -> Option<ElemId> {
        self.language.constant_index(name).map(|i| self.consts[i])
    }

    /// Distinguished elements, i.e. interpretations of constant symbols.
    pub fn distinguished(&self) -> Vec<ElemId> {
        let mut v = self.consts.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn apply(&self, op: usize, args: &[ElemId]) -> ElemId {
        let table = &self.ops[op];
        debug_assert_eq!(table.rank, args.len());
        let n = self.size();
        let mut idx = 0usize;
        for &a in args {
            if a == UNDEF {
                return UNDEF;
            }
            idx = idx * n + a as usize;
        }
        table.rows[idx]
    }

    pub fn is_total(&self) -> bool {
        self.ops.iter().all(|t| !t.rows.contains(&UNDEF))
    }
}

impl fmt::Display for PartialAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}, |A|={}, L={})",
            self.name,
            self.kind,
            self.size(),
            self.language
        )
    }
}

/// Assignment of carrier elements to `z1..zk`.
pub type Assignment = [ElemId];

/// Evaluates `t` under `asg`; `Ok(None)` means undefined.
pub fn eval_term(alg: &PartialAlgebra, t: &Term, asg: &Assignment) -> Result<Option<ElemId>> {
    let v = eval_raw(alg, t, asg)?;
    Ok((v != UNDEF).then_some(v))
}

fn eval_raw(alg: &PartialAlgebra, t: &Term, asg: &Assignment) -> Result<ElemId> {
    match t {
        Term::Var(i) => {
            let i = *i as usize;
            if i == 0 || i > asg.len() {
                return Err(Error::UnboundVariable(i as u32));
            }
            Ok(asg[i - 1])
        }
        Term::Const(c) => alg
            .constant_named(c)
            .ok_or_else(|| Error::UnknownConstant(c.clone())),
        Term::App(f, args) => {
            let idx = alg
                .language()
                .function_index(f)
                .ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
            let rank = alg.op(idx).rank;
            if rank != args.len() {
                return Err(Error::ArityMismatch {
                    symbol: f.clone(),
                    expected: rank,
                    got: args.len(),
                });
            }
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_raw(alg, a, asg)?);
            }
            Ok(alg.apply(idx, &vals))
        }
    }
}

/// Number of rows of a `k`-ary table over a carrier of size `n`.
pub fn table_len(n: usize, k: usize) -> Option<usize> {
    n.checked_pow(k as u32)
}

/// Decodes row `index` of a `k`-ary table into an assignment.
pub fn decode_tuple(mut index: usize, n: usize, k: usize) -> Vec<ElemId> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = (index % n) as ElemId;
        index /= n;
    }
    out
}

pub fn encode_tuple(tuple: &[ElemId], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * n + e as usize)
}

/// Full table of `t` as a `k`-ary function, evaluated term-wise.
pub fn term_table(alg: &PartialAlgebra, t: &Term, k: usize) -> Result<Vec<ElemId>> {
    let n = alg.size();
    let len = table_len(n, k).ok_or_else(|| Error::TermOutOfBounds(t.to_string()))?;
    (0..len)
        .map(|i| eval_raw(alg, t, &decode_tuple(i, n, k)))
        .collect()
}

/// Outcome of an injectivity or constancy check on a term table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableProperty {
    pub holds: bool,
    /// Some row of the table is undefined; `holds` judges the defined rows only.
    pub partial: bool,
}

fn induced(alg: &PartialAlgebra, t: &Term) -> Result<Vec<ElemId>> {
    let k = t.max_variable() as usize;
    term_table(alg, t, k)
}

pub fn is_injective(alg: &PartialAlgebra, t: &Term) -> Result<TableProperty> {
    let table = induced(alg, t)?;
    let mut seen = vec![false; alg.size()];
    let mut holds = true;
    for &v in table.iter().filter(|&&v| v != UNDEF) {
        if std::mem::replace(&mut seen[v as usize], true) {
            holds = false;
            break;
        }
    }
    Ok(TableProperty {
        holds,
        partial: table.contains(&UNDEF),
    })
}

pub fn is_constant(alg: &PartialAlgebra, t: &Term) -> Result<TableProperty> {
    let table = induced(alg, t)?;
    let mut defined = table.iter().filter(|&&v| v != UNDEF);
    let holds = match defined.next() {
        None => true,
        Some(first) => defined.all(|v| v == first),
    };
    Ok(TableProperty {
        holds,
        partial: table.contains(&UNDEF),
    })
}

/// Source and target algebra over one language. A single-domain pair uses
/// the same algebra on both sides.
#[derive(Debug, Clone)]
pub struct AlgebraPair {
    source: Arc<PartialAlgebra>,
    target: Arc<PartialAlgebra>,
}

impl AlgebraPair {
    pub fn new(source: Arc<PartialAlgebra>, target: Arc<PartialAlgebra>) -> Result<Self> {
        if source.language() != target.language() {
            return Err(Error::LanguageMismatch {
                source_name: source.name().to_string(),
                target_name: target.name().to_string(),
            });
        }
        Ok(AlgebraPair { source, target })
    }

    pub fn single(alg: Arc<PartialAlgebra>) -> Self {
        AlgebraPair {
            source: alg.clone(),
            target: alg,
        }
    }

    pub fn source(&self) -> &PartialAlgebra {
        &self.source
    }

    pub fn target(&self) -> &PartialAlgebra {
        &self.target
    }

    pub fn source_arc(&self) -> &Arc<PartialAlgebra> {
        &self.source
    }

    pub fn target_arc(&self) -> &Arc<PartialAlgebra> {
        &self.target
    }

    pub fn language(&self) -> &Language {
        self.source.language()
    }

    pub fn is_single_domain(&self) -> bool {
        Arc::ptr_eq(&self.source, &self.target) || *self.source == *self.target
    }
}
