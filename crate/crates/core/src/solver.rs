//! Solving `a:b::c:z` by subset-maximality of justification sets.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::algebra::{eval_term, ElemId, UNDEF};
use crate::clone::{Bounds, ClassSet};
use crate::error::{Error, Result};
use crate::justification::{is_strictly_trivial, Characteristic, JusTable, Justification};
use crate::lang::Term;

/// A rejected `d'` together with a solution whose set strictly contains its
/// own and the first member of the difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dominance {
    pub rejected: ElemId,
    pub by: ElemId,
    pub separating: Justification,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub a: ElemId,
    pub b: ElemId,
    pub c: ElemId,
    /// Ascending target element ids.
    pub solutions: Vec<ElemId>,
    pub dominance: Vec<Dominance>,
    /// Every justification set holds only strictly trivial members (or is
    /// empty), so every element is a solution.
    pub degenerate_trivial: bool,
    pub bounds: Bounds,
    pub saturated: Vec<bool>,
    #[serde(skip)]
    pub table: JusTable,
}

impl SolutionReport {
    pub fn is_solution(&self, d: ElemId) -> bool {
        self.solutions.binary_search(&d).is_ok()
    }

    pub fn dominance_of(&self, d: ElemId) -> Option<&Dominance> {
        self.dominance.iter().find(|x| x.rejected == d)
    }

    /// Members of `Jus(a:b::c:d)`, in table order.
    pub fn jus(&self, d: ElemId) -> Vec<Justification> {
        self.table.members[d as usize]
            .ones()
            .map(|i| self.table.pairs[i])
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Drop strictly trivial justifications before comparing sets.
    pub exclude_trivial: bool,
}

/// Indices of the `⊆`-maximal sets among `table.members`.
pub(crate) fn maximal(table: &JusTable) -> Vec<ElemId> {
    let counts: Vec<usize> = table.members.iter().map(|m| m.count_ones(..)).collect();
    (0..table.members.len())
        .filter(|&d| dominator(&table.members, &counts, d, |_| true).is_none())
        .map(|d| d as ElemId)
        .collect()
}

fn dominator(
    sets: &[FixedBitSet],
    counts: &[usize],
    d: usize,
    allowed: impl Fn(usize) -> bool,
) -> Option<usize> {
    (0..sets.len()).find(|&o| allowed(o) && counts[o] > counts[d] && sets[d].is_subset(&sets[o]))
}

pub fn solve(cs: &ClassSet, a: ElemId, b: ElemId, c: ElemId) -> Result<SolutionReport> {
    solve_with(cs, a, b, c, SolveOptions::default())
}

pub fn solve_with(
    cs: &ClassSet,
    a: ElemId,
    b: ElemId,
    c: ElemId,
    options: SolveOptions,
) -> Result<SolutionReport> {
    let table = if options.exclude_trivial {
        JusTable::compute_filtered(cs, a, b, c, |j| !is_strictly_trivial(cs, j))?
    } else {
        JusTable::compute(cs, a, b, c)?
    };
    Ok(report_from_table(cs, table))
}

pub(crate) fn report_from_table(cs: &ClassSet, table: JusTable) -> SolutionReport {
    let sets = &table.members;
    let counts: Vec<usize> = sets.iter().map(|m| m.count_ones(..)).collect();
    let solutions: Vec<ElemId> = (0..sets.len())
        .filter(|&d| dominator(sets, &counts, d, |_| true).is_none())
        .map(|d| d as ElemId)
        .collect();
    let is_sol = |o: usize| solutions.binary_search(&(o as ElemId)).is_ok();
    let mut dominance = Vec::new();
    for d in 0..sets.len() {
        if is_sol(d) {
            continue;
        }
        // strict inclusion is transitive on a finite carrier, so some
        // maximal set lies above every rejected one
        let by = dominator(sets, &counts, d, is_sol).expect("maximal superset exists");
        let separating = sets[by]
            .ones()
            .find(|&i| !sets[d].contains(i))
            .expect("strict superset has a separating member");
        dominance.push(Dominance {
            rejected: d as ElemId,
            by: by as ElemId,
            separating: table.pairs[separating],
        });
    }
    SolutionReport {
        a: table.a,
        b: table.b,
        c: table.c,
        solutions,
        dominance,
        degenerate_trivial: degenerate(cs, &table, &counts),
        bounds: cs.bounds(),
        saturated: cs.saturated().to_vec(),
        table,
    }
}

fn degenerate(cs: &ClassSet, table: &JusTable, counts: &[usize]) -> bool {
    // a trivial member lies in every set, so all sets must be full
    counts.iter().all(|&n| n == table.pairs.len())
        && table.pairs.iter().all(|&j| is_strictly_trivial(cs, j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// A member of `Jus(d)` hits `c` at a unique target tuple.
    Characteristic,
    /// Full maximality comparison over the target carrier.
    Exhaustive,
}

#[derive(Debug, Clone, Serialize)]
pub struct HoldsReport {
    pub a: ElemId,
    pub b: ElemId,
    pub c: ElemId,
    pub d: ElemId,
    pub holds: bool,
    pub route: Route,
    /// The characteristic member when `route` is `Characteristic`.
    pub characteristic: Option<Justification>,
    /// Present exactly when the proportion fails.
    pub dominance: Option<Dominance>,
    pub bounds: Bounds,
    pub saturated: Vec<bool>,
}

/// Decides `a:b::c:d`, short-circuiting through a characteristic member
/// when one exists.
pub fn holds(cs: &ClassSet, a: ElemId, b: ElemId, c: ElemId, d: ElemId) -> Result<HoldsReport> {
    check_target(cs, d)?;
    if let Some(j) = injective_member(cs, a, b, c, d)? {
        return Ok(HoldsReport {
            a,
            b,
            c,
            d,
            holds: true,
            route: Route::Characteristic,
            characteristic: Some(j),
            dominance: None,
            bounds: cs.bounds(),
            saturated: cs.saturated().to_vec(),
        });
    }
    holds_exhaustive(cs, a, b, c, d)
}

/// Decides `a:b::c:d` by solving the equation.
pub fn holds_exhaustive(
    cs: &ClassSet,
    a: ElemId,
    b: ElemId,
    c: ElemId,
    d: ElemId,
) -> Result<HoldsReport> {
    check_target(cs, d)?;
    let report = solve(cs, a, b, c)?;
    Ok(holds_from(&report, d))
}

pub(crate) fn holds_from(report: &SolutionReport, d: ElemId) -> HoldsReport {
    HoldsReport {
        a: report.a,
        b: report.b,
        c: report.c,
        d,
        holds: report.is_solution(d),
        route: Route::Exhaustive,
        characteristic: None,
        dominance: report.dominance_of(d).copied(),
        bounds: report.bounds,
        saturated: report.saturated.clone(),
    }
}

fn check_target(cs: &ClassSet, d: ElemId) -> Result<()> {
    let target = cs.pair().target();
    if d as usize >= target.size() {
        return Err(Error::ElementNotInCarrier {
            literal: format!("#{d}"),
            algebra: target.name().to_string(),
        });
    }
    Ok(())
}

/// A member of `Jus(a:b::c:d)` whose left side takes the value `c` at
/// exactly one target tuple.
pub fn injective_member(
    cs: &ClassSet,
    a: ElemId,
    b: ElemId,
    c: ElemId,
    d: ElemId,
) -> Result<Option<Justification>> {
    check_target(cs, d)?;
    let ns = cs.pair().source().size();
    let nt = cs.pair().target().size();
    if a as usize >= ns || b as usize >= ns || c as usize >= nt {
        let (lit, alg) = if c as usize >= nt {
            (c, cs.pair().target())
        } else {
            (a.max(b), cs.pair().source())
        };
        return Err(Error::ElementNotInCarrier {
            literal: format!("#{lit}"),
            algebra: alg.name().to_string(),
        });
    }
    for k in 0..=cs.max_arity() {
        for s in cs.arity_range(k) {
            let st = cs.target_table(s);
            let mut hits = st
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == c)
                .map(|(i, _)| i);
            let (Some(row), None) = (hits.next(), hits.next()) else {
                continue;
            };
            let ss = cs.source_table(s);
            let ea: Vec<usize> = (0..ss.len()).filter(|&e| ss[e] == a).collect();
            if ea.is_empty() {
                continue;
            }
            for t in cs.arity_range(k) {
                if cs.target_table(t)[row] == d && ea.iter().any(|&e| cs.source_table(t)[e] == b) {
                    return Ok(Some(Justification::new(s, t)));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionalSolution {
    pub a: ElemId,
    pub b: ElemId,
    pub c: ElemId,
    pub d: ElemId,
    /// `z1 -> t` as enumerated classes, when `t` is within bounds.
    pub justification: Option<Justification>,
    pub tag: Characteristic,
}

/// `a : t(a) :: c : t(c)` for a unary term `t`.
pub fn functional_solution(
    cs: &ClassSet,
    t: &Term,
    a: ElemId,
    c: ElemId,
) -> Result<FunctionalSolution> {
    t.check(cs.pair().language())?;
    if t.variables().iter().any(|&v| v != 1) {
        return Err(Error::TermOutOfBounds(format!("{t} is not unary in z1")));
    }
    let src = cs.pair().source();
    let tgt = cs.pair().target();
    if a as usize >= src.size() {
        return Err(Error::ElementNotInCarrier {
            literal: format!("#{a}"),
            algebra: src.name().to_string(),
        });
    }
    if c as usize >= tgt.size() {
        return Err(Error::ElementNotInCarrier {
            literal: format!("#{c}"),
            algebra: tgt.name().to_string(),
        });
    }
    let b = eval_term(src, t, &[a])?.filter(|&v| v != UNDEF);
    let d = eval_term(tgt, t, &[c])?.filter(|&v| v != UNDEF);
    let b = b.ok_or_else(|| Error::UndefinedAt(format!("{t} at {}", src.literal(a))))?;
    let d = d.ok_or_else(|| Error::UndefinedAt(format!("{t} at {}", tgt.literal(c))))?;
    let justification = if cs.max_arity() >= 1 {
        let z = cs.class_of_arity(&Term::var(1), 1)?;
        let tc = cs.class_of_arity(t, 1)?;
        z.zip(tc).map(|(s, t)| Justification::new(s, t))
    } else {
        None
    };
    Ok(FunctionalSolution {
        a,
        b,
        c,
        d,
        justification,
        tag: Characteristic::YesByInjectivity,
    })
}
