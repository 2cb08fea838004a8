//! Generators for the standard structures: booleans, powersets, bounded
//! integers, residues, bounded words, bare sets and explicit tables.
//!
//! Parameters are plain `key=value` strings, the same ones accepted in an
//! algebra spec file:
//!
//! | key        | kinds                          | value                                  |
//! |------------|--------------------------------|----------------------------------------|
//! | `ops`      | all but `bare_set`, `table`    | `sym:prim,...` or bare `prim`          |
//! | `consts`   | all                            | `sym:literal,...` and/or `all`         |
//! | `universe` | `powerset`                     | `a,b,...`                              |
//! | `interval` | `int_interval`                 | `lo..hi`                               |
//! | `n`        | `mod_n`                        | modulus                                |
//! | `alphabet`, `maxlen` | `words`              | letters, maximum word length           |
//! | `elems`    | `bare_set`, `table`            | element names                          |
//! | `fns`      | `table`                        | `sym/rank,...`                         |
//! | `rows`     | `table`                        | `sym(x,y)=r;...` (`r` may be `undef`)  |

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{
    decode_tuple, table_len, Codec, ElemId, Element, PartialAlgebra, MAX_CARRIER, UNDEF,
};
use crate::error::{Error, Result};
use crate::lang::Language;

pub type Params = BTreeMap<String, String>;

pub const KINDS: &[&str] = &[
    "bool_or",
    "bool_and",
    "powerset",
    "int_interval",
    "mod_n",
    "words",
    "bare_set",
    "table",
];

/// Keys each kind accepts.
pub fn allowed_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "bool_or" | "bool_and" => &["ops", "consts"],
        "powerset" => &["universe", "ops", "consts"],
        "int_interval" => &["interval", "ops", "consts"],
        "mod_n" => &["n", "ops", "consts"],
        "words" => &["alphabet", "maxlen", "ops", "consts"],
        "bare_set" => &["elems", "consts"],
        "table" => &["elems", "fns", "rows", "consts"],
        _ => return None,
    })
}

/// Primitive operations available per kind, with ranks.
pub fn primitives(kind: &str) -> &'static [(&'static str, usize)] {
    match kind {
        "bool_or" | "bool_and" => &[("or", 2), ("and", 2), ("not", 1)],
        "powerset" => &[("cap", 2), ("cup", 2), ("comp", 1), ("diff", 2)],
        "int_interval" => &[
            ("add", 2),
            ("sub", 2),
            ("mul", 2),
            ("neg", 1),
            ("div_exact", 2),
        ],
        "mod_n" => &[("add", 2), ("sub", 2), ("mul", 2), ("neg", 1)],
        "words" => &[("cat", 2)],
        _ => &[],
    }
}

fn default_ops(kind: &str) -> &'static str {
    match kind {
        "bool_or" => "or",
        "bool_and" => "and",
        "powerset" => "cap,cup,comp",
        "mod_n" => "add",
        "words" => "cat",
        _ => "",
    }
}

fn alias(prim: &str) -> &str {
    match prim {
        "+" => "add",
        "-" => "sub",
        "*" | "·" => "mul",
        "/" => "div_exact",
        "∪" => "cup",
        "∩" => "cap",
        "." => "cat",
        other => other,
    }
}

/// Splits on `sep` outside of `{...}`.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out.retain(|s| !s.is_empty());
    out
}

struct Ctx<'a> {
    kind: &'a str,
}

impl Ctx<'_> {
    fn bad(&self, message: impl Into<String>) -> Error {
        Error::BadParams {
            kind: self.kind.to_string(),
            message: message.into(),
        }
    }
}

/// Builds a named builtin algebra.
pub fn builtin(kind: &str, name: &str, params: &Params) -> Result<PartialAlgebra> {
    let cx = Ctx { kind };
    let allowed = allowed_keys(kind).ok_or_else(|| cx.bad(format!("unknown kind `{kind}`")))?;
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(cx.bad(format!("unknown key `{k}`")));
    }
    let get = |key: &str| params.get(key).map(String::as_str);
    let require = |key: &str| get(key).ok_or_else(|| cx.bad(format!("missing `{key}`")));

    let (codec, elements) = match kind {
        "bool_or" | "bool_and" => (Codec::Int, vec![Element::Int(0), Element::Int(1)]),
        "powerset" => {
            let universe = names(require("universe")?);
            if universe.len() > 15 {
                return Err(cx.bad("powerset universe is limited to 15 elements"));
            }
            check_distinct(&cx, &universe)?;
            let elements = (0..1u64 << universe.len()).map(Element::Set).collect();
            (Codec::Set { universe }, elements)
        }
        "int_interval" => {
            let spec = require("interval")?;
            let (lo, hi) = spec
                .split_once("..")
                .and_then(|(l, h)| {
                    Some((l.trim().parse::<i64>().ok()?, h.trim().parse::<i64>().ok()?))
                })
                .ok_or_else(|| cx.bad(format!("bad interval `{spec}`, expected lo..hi")))?;
            if lo > hi || (hi - lo) as usize >= MAX_CARRIER - 1 {
                return Err(cx.bad(format!("interval {lo}..{hi} is empty or too large")));
            }
            (Codec::Int, (lo..=hi).map(Element::Int).collect())
        }
        "mod_n" => {
            let n: i64 = require("n")?
                .trim()
                .parse()
                .map_err(|_| cx.bad("`n` must be a positive integer"))?;
            if n < 1 || n as usize >= MAX_CARRIER {
                return Err(cx.bad("`n` out of range"));
            }
            (Codec::Int, (0..n).map(Element::Int).collect())
        }
        "words" => {
            let alphabet = names(require("alphabet")?);
            if alphabet.is_empty() || alphabet.iter().any(|a| a.chars().count() != 1) {
                return Err(cx.bad("alphabet must list single characters"));
            }
            check_distinct(&cx, &alphabet)?;
            let maxlen: usize = require("maxlen")?
                .trim()
                .parse()
                .map_err(|_| cx.bad("`maxlen` must be a non-negative integer"))?;
            (Codec::Word, words(&cx, &alphabet, maxlen)?)
        }
        "bare_set" | "table" => {
            let elems = names(require("elems")?);
            check_distinct(&cx, &elems)?;
            (Codec::Atom, elems.into_iter().map(Element::Atom).collect())
        }
        _ => unreachable!(),
    };
    if elements.len() >= MAX_CARRIER {
        return Err(cx.bad(format!("carrier has {} elements", elements.len())));
    }
    let index: HashMap<Element, ElemId> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i as ElemId))
        .collect();

    let mut functions: Vec<(String, usize)> = Vec::new();
    let mut tables: Vec<(String, Vec<ElemId>)> = Vec::new();
    if kind == "table" {
        for decl in split_top(get("fns").unwrap_or(""), ',') {
            let (sym, rank) = decl
                .split_once('/')
                .and_then(|(s, r)| Some((s.trim().to_string(), r.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| cx.bad(format!("bad function declaration `{decl}`")))?;
            functions.push((sym, rank));
        }
        tables = table_rows(
            &cx,
            &functions,
            &elements,
            &codec,
            get("rows").unwrap_or(""),
        )?;
    } else {
        let ops = get("ops").unwrap_or_else(|| default_ops(kind));
        for item in split_top(ops, ',') {
            let (sym, prim) = match item.split_once(':') {
                Some((s, p)) => (s.trim().to_string(), alias(p.trim()).to_string()),
                None => (
                    alias(item.trim()).to_string(),
                    alias(item.trim()).to_string(),
                ),
            };
            let rank = primitives(kind)
                .iter()
                .find(|(p, _)| *p == prim)
                .map(|(_, r)| *r)
                .ok_or_else(|| cx.bad(format!("`{prim}` is not an operation of {kind}")))?;
            let modulus = (kind == "mod_n").then_some(elements.len() as i64);
            let rows = primitive_table(&elements, &index, &prim, rank, &codec, modulus);
            functions.push((sym.clone(), rank));
            tables.push((sym, rows));
        }
    }

    let mut consts: Vec<(String, ElemId)> = Vec::new();
    for item in split_top(get("consts").unwrap_or(""), ',') {
        if item == "all" {
            for (i, e) in elements.iter().enumerate() {
                consts.push((auto_constant_name(&codec, e), i as ElemId));
            }
            continue;
        }
        let (sym, lit) = item
            .split_once(':')
            .ok_or_else(|| cx.bad(format!("bad constant `{item}`, expected sym:literal")))?;
        let value = codec
            .read(lit)
            .and_then(|v| index.get(&v).copied())
            .ok_or_else(|| cx.bad(format!("`{}` is not in the carrier", lit.trim())))?;
        consts.push((sym.trim().to_string(), value));
    }

    let language = Language::new(functions.clone(), consts.iter().map(|(s, _)| s.clone()))
        .map_err(|e| cx.bad(e.to_string()))?;
    PartialAlgebra::new(name, kind, language, codec, elements, tables, consts)
}

fn names(s: &str) -> Vec<String> {
    s.split(',')
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

fn check_distinct(cx: &Ctx<'_>, items: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    match items.iter().find(|i| !seen.insert(i.as_str())) {
        Some(dup) => Err(cx.bad(format!("`{dup}` listed twice"))),
        None => Ok(()),
    }
}

fn words(cx: &Ctx<'_>, alphabet: &[String], maxlen: usize) -> Result<Vec<Element>> {
    let mut out = vec![Element::Word(String::new())];
    let mut layer = vec![String::new()];
    for _ in 0..maxlen {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for a in alphabet {
                next.push(format!("{w}{a}"));
            }
        }
        out.extend(next.iter().cloned().map(Element::Word));
        if out.len() >= MAX_CARRIER {
            return Err(cx.bad("too many words; lower `maxlen`"));
        }
        layer = next;
    }
    Ok(out)
}

fn primitive_table(
    elements: &[Element],
    index: &HashMap<Element, ElemId>,
    prim: &str,
    rank: usize,
    codec: &Codec,
    modulus: Option<i64>,
) -> Vec<ElemId> {
    let n = elements.len();
    let full = match codec {
        Codec::Set { universe } => (1u64 << universe.len()) - 1,
        _ => 0,
    };
    let len = table_len(n, rank).expect("primitive tables are small");
    (0..len)
        .map(|row| {
            let args = decode_tuple(row, n, rank);
            let vals: Vec<&Element> = args.iter().map(|&a| &elements[a as usize]).collect();
            let result = apply_primitive(prim, &vals, full).map(|e| match (e, modulus) {
                (Element::Int(i), Some(m)) => Element::Int(i.rem_euclid(m)),
                (e, _) => e,
            });
            result.and_then(|v| index.get(&v).copied()).unwrap_or(UNDEF)
        })
        .collect()
}

fn apply_primitive(prim: &str, args: &[&Element], full: u64) -> Option<Element> {
    use Element::*;
    Some(match (prim, args) {
        ("or", [Int(x), Int(y)]) => Int(x | y),
        ("and", [Int(x), Int(y)]) => Int(x & y),
        ("not", [Int(x)]) => Int(1 - x),
        ("cap", [Set(x), Set(y)]) => Set(x & y),
        ("cup", [Set(x), Set(y)]) => Set(x | y),
        ("diff", [Set(x), Set(y)]) => Set(x & !y),
        ("comp", [Set(x)]) => Set(full & !x),
        ("add", [Int(x), Int(y)]) => Int(x.checked_add(*y)?),
        ("sub", [Int(x), Int(y)]) => Int(x.checked_sub(*y)?),
        ("mul", [Int(x), Int(y)]) => Int(x.checked_mul(*y)?),
        ("neg", [Int(x)]) => Int(x.checked_neg()?),
        ("div_exact", [Int(x), Int(y)]) => {
            if *y == 0 || x % y != 0 {
                return None;
            }
            Int(x / y)
        }
        ("cat", [Word(x), Word(y)]) => Word(format!("{x}{y}")),
        _ => return None,
    })
}

/// Name used for an element when `consts=all` is requested.
pub fn auto_constant_name(codec: &Codec, e: &Element) -> String {
    let sanitize = |s: &str| -> String {
        s.chars()
            .map(|c| match c {
                c if c.is_ascii_alphanumeric() || c == '_' => c.to_string(),
                '\'' => "p".to_string(),
                _ => "_".to_string(),
            })
            .collect()
    };
    match (codec, e) {
        (_, Element::Int(i)) if *i < 0 => format!("cm{}", -i),
        (_, Element::Int(i)) => format!("c{i}"),
        (Codec::Set { universe }, Element::Set(mask)) => {
            if *mask == 0 {
                return "s_empty".to_string();
            }
            let items: Vec<String> = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, u)| sanitize(u))
                .collect();
            format!("s_{}", items.join("_"))
        }
        (_, Element::Word(w)) if w.is_empty() => "w_eps".to_string(),
        (_, Element::Word(w)) => format!("w_{}", sanitize(w)),
        (_, Element::Atom(a)) => format!("c_{}", sanitize(a)),
        (_, Element::Set(mask)) => format!("s_{mask}"),
    }
}

fn table_rows(
    cx: &Ctx<'_>,
    functions: &[(String, usize)],
    elements: &[Element],
    codec: &Codec,
    rows: &str,
) -> Result<Vec<(String, Vec<ElemId>)>> {
    let n = elements.len();
    let lookup = |lit: &str| -> Result<ElemId> {
        codec
            .read(lit)
            .and_then(|v| elements.iter().position(|e| *e == v))
            .map(|i| i as ElemId)
            .ok_or_else(|| cx.bad(format!("`{}` is not in the carrier", lit.trim())))
    };
    let mut tables: Vec<(String, Vec<Option<ElemId>>)> = functions
        .iter()
        .map(|(s, r)| {
            let len =
                table_len(n, *r).ok_or_else(|| cx.bad(format!("table for `{s}` too large")))?;
            Ok((s.clone(), vec![None; len]))
        })
        .collect::<Result<_>>()?;
    for row in rows.split(';').map(str::trim).filter(|r| !r.is_empty()) {
        let (lhs, rhs) = row
            .split_once('=')
            .ok_or_else(|| cx.bad(format!("bad row `{row}`, expected sym(args)=result")))?;
        let lhs = lhs.trim();
        let (sym, args) = lhs
            .strip_suffix(')')
            .and_then(|l| l.split_once('('))
            .ok_or_else(|| cx.bad(format!("bad row `{row}`")))?;
        let pos = functions
            .iter()
            .position(|(s, _)| s == sym.trim())
            .ok_or_else(|| cx.bad(format!("row for undeclared symbol `{}`", sym.trim())))?;
        let rank = functions[pos].1;
        let args: Vec<ElemId> = args.split(',').map(&lookup).collect::<Result<_>>()?;
        if args.len() != rank {
            return Err(cx.bad(format!(
                "row `{row}` has {} arguments, expected {rank}",
                args.len()
            )));
        }
        let idx = args.iter().fold(0usize, |acc, &a| acc * n + a as usize);
        let value = match rhs.trim() {
            "undef" | "⊥" => UNDEF,
            lit => lookup(lit)?,
        };
        if tables[pos].1[idx].replace(value).is_some() {
            return Err(cx.bad(format!("row `{row}` given twice")));
        }
    }
    tables
        .into_iter()
        .map(|(sym, rows)| {
            let filled: Option<Vec<ElemId>> = rows.iter().copied().collect();
            match filled {
                Some(r) => Ok((sym, r)),
                None => {
                    let missing = rows.iter().position(Option::is_none).unwrap();
                    let rank = functions.iter().find(|(s, _)| *s == sym).unwrap().1;
                    let args: Vec<String> = decode_tuple(missing, n, rank)
                        .into_iter()
                        .map(|a| codec.print(&elements[a as usize]))
                        .collect();
                    Err(cx.bad(format!("missing row {sym}({})", args.join(","))))
                }
            }
        })
        .collect()
}
