//! Reference solver that works on term syntax directly.
//!
//! Terms are generated as trees up to the depth bound and interpreted with
//! [`eval_term`] on every tuple; no table composition or class merging is
//! involved. Justifications are compared as sets of pairs of induced
//! functions, which partitions the term-pair sets without changing any
//! inclusion between them.

use std::collections::HashSet;

use crate::algebra::{
    decode_tuple, eval_term, table_len, AlgebraPair, ElemId, PartialAlgebra, UNDEF,
};
use crate::clone::Bounds;
use crate::error::{Error, Result};
use crate::lang::{Language, Term};

/// Upper bound on generated terms per arity.
pub const DEFAULT_TERM_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveReport {
    pub solutions: Vec<ElemId>,
    /// Syntactic terms generated over all arities.
    pub terms: usize,
}

/// Joint behaviour of one term on `source^k` then `target^k`.
type Behaviour = Vec<ElemId>;

fn evaluate(alg: &PartialAlgebra, t: &Term, k: usize, out: &mut Behaviour) -> Result<()> {
    let n = alg.size();
    let len = table_len(n, k).ok_or_else(|| Error::InvalidBounds("tables too large".into()))?;
    for row in 0..len {
        let tuple = decode_tuple(row, n, k);
        out.push(eval_term(alg, t, &tuple)?.unwrap_or(UNDEF));
    }
    Ok(())
}

/// Distinct behaviours of all terms over `z1..zk` of depth at most `depth`.
fn behaviours(
    pair: &AlgebraPair,
    k: usize,
    depth: usize,
    limit: usize,
) -> Result<(Vec<Behaviour>, usize)> {
    let lang = pair.language();
    let mut atoms: Vec<Term> = (1..=k as u32).map(Term::var).collect();
    atoms.extend(lang.constants().iter().map(|c| Term::constant(c.as_str())));

    let mut seen: HashSet<Behaviour> = HashSet::new();
    let mut count = 0usize;
    let mut record = |t: &Term| -> Result<()> {
        count += 1;
        if count > limit {
            return Err(Error::ScopeTooLarge { size: count, limit });
        }
        let mut b = Vec::new();
        evaluate(pair.source(), t, k, &mut b)?;
        evaluate(pair.target(), t, k, &mut b)?;
        seen.insert(b);
        Ok(())
    };

    // terms of depth < depth are kept; the last layer is streamed
    let mut upto: Vec<Term> = atoms.clone();
    for t in &atoms {
        record(t)?;
    }
    for level in 1..=depth {
        let mut fresh = Vec::new();
        for f in lang.functions() {
            let mut args = vec![0usize; f.rank];
            if upto.is_empty() {
                break;
            }
            loop {
                let t = Term::app(
                    f.name.as_str(),
                    args.iter().map(|&i| upto[i].clone()).collect(),
                );
                // only terms of depth exactly `level` are new
                if t.depth() == level {
                    record(&t)?;
                    if level < depth {
                        fresh.push(t);
                    }
                }
                if !advance(&mut args, upto.len()) {
                    break;
                }
            }
        }
        upto.extend(fresh);
    }
    Ok((seen.into_iter().collect(), count))
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Solutions of `a:b::c:z` over the pair at the given arity and depth bounds.
pub fn solve(
    pair: &AlgebraPair,
    bounds: Bounds,
    a: ElemId,
    b: ElemId,
    c: ElemId,
    limit: usize,
) -> Result<NaiveReport> {
    let ns = pair.source().size();
    let nt = pair.target().size();
    let mut per_d: Vec<HashSet<(usize, usize, usize)>> = vec![HashSet::new(); nt];
    let mut terms = 0;
    for k in 0..=bounds.max_arity {
        let (bs, count) = behaviours(pair, k, bounds.max_depth, limit)?;
        terms += count;
        let src_len = table_len(ns, k).unwrap();
        let tgt_len = table_len(nt, k).unwrap();
        for (si, s) in bs.iter().enumerate() {
            for (ti, t) in bs.iter().enumerate() {
                let source_ok = (0..src_len).any(|e| s[e] == a && t[e] == b);
                if !source_ok {
                    continue;
                }
                for e in 0..tgt_len {
                    let (sv, tv) = (s[src_len + e], t[src_len + e]);
                    if sv == c && tv != UNDEF {
                        per_d[tv as usize].insert((k, si, ti));
                    }
                }
            }
        }
    }
    let solutions = (0..nt)
        .filter(|&d| {
            (0..nt).all(|o| !(per_d[d].is_subset(&per_d[o]) && !per_d[o].is_subset(&per_d[d])))
        })
        .map(|d| d as ElemId)
        .collect();
    Ok(NaiveReport { solutions, terms })
}

/// Number of syntactic terms the oracle would generate, per arity, without
/// evaluating anything. Saturates at `usize::MAX`.
pub fn term_counts(lang: &Language, bounds: Bounds) -> Vec<usize> {
    (0..=bounds.max_arity)
        .map(|k| {
            let atoms = k + lang.constants().len();
            let mut n = atoms;
            for _ in 0..bounds.max_depth {
                let mut next = atoms;
                for f in lang.functions() {
                    let p = (0..f.rank).try_fold(1usize, |acc, _| acc.checked_mul(n));
                    next = p.and_then(|p| next.checked_add(p)).unwrap_or(usize::MAX);
                }
                n = next;
            }
            n
        })
        .collect()
}
