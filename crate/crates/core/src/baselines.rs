//! Two decomposition-based models of proportions, for comparison with the
//! justification-based solver.
//!
//! Sets are bitmasks over a universe of at most 64 elements.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{Codec, ElemId, Element};
use crate::clone::ClassSet;
use crate::error::{Error, Result};
use crate::solver;

/// Largest number of 4-tuples [`compare`] will scan by default.
pub const DEFAULT_SCOPE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `A = A1 ∪ A2, B = A1 ∪ D2, C = D1 ∪ A2, D = D1 ∪ D2`.
    SySets,
    /// `B = (A - E) ∪ F, D = (C - E) ∪ F`.
    MbdSets,
    /// `a = a1 + a2, b = a1 + d2, c = d1 + a2, d = d1 + d2`.
    SyNumbers,
}

impl Model {
    pub fn id(self) -> &'static str {
        match self {
            Model::SySets => "sy_sets",
            Model::MbdSets => "mbd_sets",
            Model::SyNumbers => "sy_numbers",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Model> {
        match s {
            "sy_sets" | "sy" => Ok(Model::SySets),
            "mbd_sets" | "mbd" => Ok(Model::MbdSets),
            "sy_numbers" | "sy_num" => Ok(Model::SyNumbers),
            _ => Err(Error::Unsupported(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    SySets { a1: u64, a2: u64, d1: u64, d2: u64 },
    MbdSets { e: u64, f: u64 },
    SyNumbers { a1: i64, a2: i64, d1: i64, d2: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BaselineVerdict {
    pub model: Model,
    pub holds: bool,
    pub witness: Option<Witness>,
}

fn check_sets(universe: usize, sets: [u64; 4]) -> Result<()> {
    let full = if universe >= 64 {
        u64::MAX
    } else {
        (1u64 << universe) - 1
    };
    if universe > 64 {
        return Err(Error::Unsupported(
            "universes are limited to 64 elements".into(),
        ));
    }
    if let Some(s) = sets.iter().find(|&&s| s & !full != 0) {
        return Err(Error::NotSubsetOfUniverse {
            literal: format!("{s:#b}"),
        });
    }
    Ok(())
}

fn bit(x: u64, i: usize) -> bool {
    x >> i & 1 == 1
}

pub fn sy_sets(universe: usize, a: u64, b: u64, c: u64, d: u64) -> Result<BaselineVerdict> {
    check_sets(universe, [a, b, c, d])?;
    let (mut a1, mut a2, mut d1, mut d2) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..universe {
        let want = [bit(a, i), bit(b, i), bit(c, i), bit(d, i)];
        // parts in order a1, a2, d1, d2; fewest memberships first
        let mut patterns: Vec<u8> = (0..16).collect();
        patterns.sort_by_key(|p| (p.count_ones(), *p));
        let found = patterns.into_iter().find(|&p| {
            let (x1, x2, y1, y2) = (p & 8 != 0, p & 4 != 0, p & 2 != 0, p & 1 != 0);
            [x1 | x2, x1 | y2, y1 | x2, y1 | y2] == want
        });
        let Some(p) = found else {
            return Ok(BaselineVerdict {
                model: Model::SySets,
                holds: false,
                witness: None,
            });
        };
        let m = 1u64 << i;
        if p & 8 != 0 {
            a1 |= m;
        }
        if p & 4 != 0 {
            a2 |= m;
        }
        if p & 2 != 0 {
            d1 |= m;
        }
        if p & 1 != 0 {
            d2 |= m;
        }
    }
    Ok(BaselineVerdict {
        model: Model::SySets,
        holds: true,
        witness: Some(Witness::SySets { a1, a2, d1, d2 }),
    })
}

pub fn mbd_sets(universe: usize, a: u64, b: u64, c: u64, d: u64) -> Result<BaselineVerdict> {
    check_sets(universe, [a, b, c, d])?;
    let (mut e, mut f) = (0u64, 0u64);
    for i in 0..universe {
        let (xa, xb, xc, xd) = (bit(a, i), bit(b, i), bit(c, i), bit(d, i));
        let found = [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .find(|&(ei, fi)| ((xa && !ei) || fi) == xb && ((xc && !ei) || fi) == xd);
        let Some((ei, fi)) = found else {
            return Ok(BaselineVerdict {
                model: Model::MbdSets,
                holds: false,
                witness: None,
            });
        };
        if ei {
            e |= 1 << i;
        }
        if fi {
            f |= 1 << i;
        }
    }
    Ok(BaselineVerdict {
        model: Model::MbdSets,
        holds: true,
        witness: Some(Witness::MbdSets { e, f }),
    })
}

/// Decided through `a + d = b + c`, which is equivalent to the existence of
/// a decomposition; the witness splits `a` in halves.
pub fn sy_numbers(a: i64, b: i64, c: i64, d: i64, bound: i64) -> Result<BaselineVerdict> {
    if let Some(&v) = [a, b, c, d].iter().find(|v| v.abs() > bound) {
        return Err(Error::OutOfBound { value: v, bound });
    }
    if a + d != b + c {
        return Ok(BaselineVerdict {
            model: Model::SyNumbers,
            holds: false,
            witness: None,
        });
    }
    let a1 = a.div_euclid(2);
    let a2 = a - a1;
    let d2 = b - a1;
    let d1 = c - a2;
    Ok(BaselineVerdict {
        model: Model::SyNumbers,
        holds: true,
        witness: Some(Witness::SyNumbers { a1, a2, d1, d2 }),
    })
}

/// Whether a witness recomposes to the given tuple. Set tuples are masks.
pub fn recomposes(w: &Witness, tuple: [i64; 4]) -> bool {
    let [a, b, c, d] = tuple;
    match *w {
        Witness::SySets { a1, a2, d1, d2 } => {
            [a1 | a2, a1 | d2, d1 | a2, d1 | d2] == [a, b, c, d].map(|x| x as u64)
        }
        Witness::MbdSets { e, f } => {
            let [a, b, c, d] = [a, b, c, d].map(|x| x as u64);
            (a & !e) | f == b && (c & !e) | f == d
        }
        Witness::SyNumbers { a1, a2, d1, d2 } => {
            [a1 + a2, a1 + d2, d1 + a2, d1 + d2] == [a, b, c, d]
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub model: Model,
    pub tuples: usize,
    pub both: usize,
    pub neither: usize,
    /// The baseline accepts what the solver rejects.
    pub baseline_only: Vec<[ElemId; 4]>,
    /// The solver accepts what the baseline rejects.
    pub solver_only: Vec<[ElemId; 4]>,
}

/// Runs a baseline and the solver on every 4-tuple of a single algebra.
///
/// Set models need a powerset carrier, the numeric model an integer one.
pub fn compare(model: Model, cs: &ClassSet, limit: usize) -> Result<ComparisonReport> {
    if !cs.pair().is_single_domain() {
        return Err(Error::NotSingleDomain);
    }
    let alg = cs.pair().source();
    let n = alg.size();
    let size = n.checked_pow(4).unwrap_or(usize::MAX);
    if size > limit {
        return Err(Error::ScopeTooLarge { size, limit });
    }
    let verdict: Box<dyn Fn([ElemId; 4]) -> Result<bool>> = match (model, alg.codec()) {
        (Model::SySets | Model::MbdSets, Codec::Set { universe }) => {
            let m = universe.len();
            let mask = move |e: ElemId| match alg.value(e) {
                Element::Set(s) => *s,
                _ => unreachable!(),
            };
            Box::new(move |t: [ElemId; 4]| {
                let [a, b, c, d] = t.map(mask);
                let v = if model == Model::SySets {
                    sy_sets(m, a, b, c, d)?
                } else {
                    mbd_sets(m, a, b, c, d)?
                };
                Ok(v.holds)
            })
        }
        (Model::SyNumbers, Codec::Int) => {
            let int = move |e: ElemId| match alg.value(e) {
                Element::Int(v) => *v,
                _ => unreachable!(),
            };
            let bound = (0..n as ElemId).map(|e| int(e).abs()).max().unwrap_or(0);
            Box::new(move |t: [ElemId; 4]| {
                let [a, b, c, d] = t.map(int);
                Ok(sy_numbers(a, b, c, d, bound)?.holds)
            })
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "{model} does not apply to the carrier of {}",
                alg.name()
            )))
        }
    };
    let mut report = ComparisonReport {
        model,
        tuples: 0,
        both: 0,
        neither: 0,
        baseline_only: Vec::new(),
        solver_only: Vec::new(),
    };
    let n = n as ElemId;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let sols = solver::solve(cs, a, b, c)?;
                for d in 0..n {
                    let t = [a, b, c, d];
                    report.tuples += 1;
                    match (verdict(t)?, sols.is_solution(d)) {
                        (true, true) => report.both += 1,
                        (false, false) => report.neither += 1,
                        (true, false) => report.baseline_only.push(t),
                        (false, true) => report.solver_only.push(t),
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A1: u64 = 1;
    const A2: u64 = 2;
    const D1: u64 = 4;
    const D2: u64 = 8;

    #[test]
    fn sy_sets_canonical_decomposition() {
        let v = sy_sets(4, A1 | A2, A1 | D2, D1 | A2, D1 | D2).unwrap();
        assert!(v.holds);
        assert!(recomposes(&v.witness.unwrap(), [3, 9, 6, 12]));
    }

    #[test]
    fn sy_sets_accepts_the_implausible_case() {
        let v = sy_sets(1, 1, 1, 1, 0).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::SySets {
                a1: 1,
                a2: 1,
                d1: 0,
                d2: 0
            })
        );
        assert!(sy_sets(0, 0, 0, 0, 0).unwrap().holds);
    }

    #[test]
    fn mbd_examples() {
        let v = mbd_sets(4, A1 | A2, A1 | D2, D1 | A2, D1 | D2).unwrap();
        assert_eq!(v.witness, Some(Witness::MbdSets { e: A2, f: D2 }));
        // {a}:{b}::∅:{a,b} over {a,b}
        assert!(!mbd_sets(2, 1, 2, 0, 3).unwrap().holds);
        assert_eq!(
            mbd_sets(2, 1, 1, 2, 2).unwrap().witness,
            Some(Witness::MbdSets { e: 0, f: 0 })
        );
    }

    #[test]
    fn sets_outside_the_universe() {
        assert!(matches!(
            sy_sets(1, 2, 0, 0, 0),
            Err(Error::NotSubsetOfUniverse { .. })
        ));
        assert!(matches!(
            mbd_sets(2, 0, 0, 4, 0),
            Err(Error::NotSubsetOfUniverse { .. })
        ));
    }

    #[test]
    fn sy_numbers_examples() {
        assert_eq!(
            sy_numbers(2, 3, 3, 4, 10).unwrap().witness,
            Some(Witness::SyNumbers {
                a1: 1,
                a2: 1,
                d1: 2,
                d2: 2
            })
        );
        assert!(!sy_numbers(0, 0, 1, 2, 10).unwrap().holds);
        let v = sy_numbers(-7, -7, 4, 4, 10).unwrap();
        assert!(recomposes(&v.witness.unwrap(), [-7, -7, 4, 4]));
        assert_eq!(
            sy_numbers(11, 0, 0, 0, 10),
            Err(Error::OutOfBound {
                value: 11,
                bound: 10
            })
        );
    }
}
