//! Exhaustive audits of the six proportion axioms on a single algebra.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::algebra::ElemId;
use crate::clone::{Bounds, ClassSet};
use crate::error::{Error, Result};
use crate::solver::{self, Dominance};

/// Counterexamples kept per report; the total is always counted.
pub const MAX_STORED: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `a:b::c:d` implies `c:d::a:b`.
    Symmetry,
    /// `a:b::c:d` implies `a:c::b:d`.
    CentralPermutation,
    /// `a:a::c:d` implies `d = c`.
    StrongDeterminism,
    /// `a:b::a:d` implies `d = b`.
    StrongReflexivity,
    /// `a:a::c:c` always.
    Determinism,
    /// `a:b::a:b` always.
    Reflexivity,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Symmetry,
        Axiom::CentralPermutation,
        Axiom::StrongDeterminism,
        Axiom::StrongReflexivity,
        Axiom::Determinism,
        Axiom::Reflexivity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Axiom::Symmetry => "symmetry",
            Axiom::CentralPermutation => "central_permutation",
            Axiom::StrongDeterminism => "strong_determinism",
            Axiom::StrongReflexivity => "strong_reflexivity",
            Axiom::Determinism => "determinism",
            Axiom::Reflexivity => "reflexivity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Axiom> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown axiom `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsExhaustively,
    Fails,
}

/// One evaluated proportion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub tuple: [ElemId; 4],
    pub holds: bool,
    /// Why the proportion fails, when it does.
    pub dominance: Option<Dominance>,
}

/// A violating tuple. Implications carry both sides; `conclusion` is absent
/// when the axiom concludes an equation or has no premise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub premise: Instance,
    pub conclusion: Option<Instance>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
    pub total_counterexamples: usize,
    pub tuples_checked: usize,
    pub bounds: Bounds,
    pub saturated: Vec<bool>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Shares solved equations across axioms on one class set.
pub struct Auditor<'a> {
    cs: &'a ClassSet,
    n: usize,
    cache: HashMap<(ElemId, ElemId, ElemId), solver::SolutionReport>,
}

impl<'a> Auditor<'a> {
    pub fn new(cs: &'a ClassSet) -> Result<Self> {
        if !cs.pair().is_single_domain() {
            return Err(Error::NotSingleDomain);
        }
        Ok(Auditor {
            cs,
            n: cs.pair().source().size(),
            cache: HashMap::new(),
        })
    }

    fn report(&mut self, a: ElemId, b: ElemId, c: ElemId) -> Result<&solver::SolutionReport> {
        if !self.cache.contains_key(&(a, b, c)) {
            let r = solver::solve(self.cs, a, b, c)?;
            self.cache.insert((a, b, c), r);
        }
        Ok(&self.cache[&(a, b, c)])
    }

    fn solutions(&mut self, a: ElemId, b: ElemId, c: ElemId) -> Result<FixedBitSet> {
        let n = self.n;
        let r = self.report(a, b, c)?;
        let mut set = FixedBitSet::with_capacity(n);
        for &d in &r.solutions {
            set.insert(d as usize);
        }
        Ok(set)
    }

    fn holds(&mut self, t: [ElemId; 4]) -> Result<bool> {
        Ok(self.report(t[0], t[1], t[2])?.is_solution(t[3]))
    }

    fn instance(&mut self, t: [ElemId; 4]) -> Result<Instance> {
        let r = self.report(t[0], t[1], t[2])?;
        let holds = r.is_solution(t[3]);
        let dominance = r.dominance_of(t[3]).copied();
        Ok(Instance {
            tuple: t,
            holds,
            dominance,
        })
    }

    pub fn check(&mut self, axiom: Axiom) -> Result<AxiomReport> {
        let start = Instant::now();
        let n = self.n as ElemId;
        let mut found: Vec<(Option<[ElemId; 4]>, [ElemId; 4])> = Vec::new();
        let mut total = 0usize;
        let mut checked = 0usize;
        let mut note = |found: &mut Vec<_>, cex| {
            total += 1;
            if found.len() < MAX_STORED {
                found.push(cex);
            }
        };
        match axiom {
            Axiom::Symmetry | Axiom::CentralPermutation => {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            let sols = self.solutions(a, b, c)?;
                            for d in 0..n {
                                checked += 1;
                                if !sols.contains(d as usize) {
                                    continue;
                                }
                                let other = if axiom == Axiom::Symmetry {
                                    [c, d, a, b]
                                } else {
                                    [a, c, b, d]
                                };
                                if !self.holds(other)? {
                                    note(&mut found, (Some(other), [a, b, c, d]));
                                }
                            }
                        }
                    }
                }
            }
            Axiom::StrongDeterminism | Axiom::StrongReflexivity => {
                for a in 0..n {
                    for x in 0..n {
                        let (b, c, want) = if axiom == Axiom::StrongDeterminism {
                            (a, x, x)
                        } else {
                            (x, a, x)
                        };
                        let sols = self.solutions(a, b, c)?;
                        for d in 0..n {
                            checked += 1;
                            if d != want && sols.contains(d as usize) {
                                note(&mut found, (None, [a, b, c, d]));
                            }
                        }
                    }
                }
            }
            Axiom::Determinism | Axiom::Reflexivity => {
                for a in 0..n {
                    for x in 0..n {
                        let t = if axiom == Axiom::Determinism {
                            [a, a, x, x]
                        } else {
                            [a, x, a, x]
                        };
                        checked += 1;
                        if !self.holds(t)? {
                            note(&mut found, (None, t));
                        }
                    }
                }
            }
        }

        let mut counterexamples = Vec::with_capacity(found.len());
        for (conclusion, premise) in found {
            let premise = self.instance(premise)?;
            let conclusion = conclusion.map(|t| self.instance(t)).transpose()?;
            self.verify(&premise)?;
            if let Some(c) = &conclusion {
                self.verify(c)?;
            }
            counterexamples.push(Counterexample {
                premise,
                conclusion,
            });
        }
        Ok(AxiomReport {
            axiom,
            verdict: if total == 0 {
                Verdict::HoldsExhaustively
            } else {
                Verdict::Fails
            },
            counterexamples,
            total_counterexamples: total,
            tuples_checked: checked,
            bounds: self.cs.bounds(),
            saturated: self.cs.saturated().to_vec(),
            elapsed: start.elapsed(),
        })
    }

    /// Recomputes a verdict through [`solver::holds`] without the cache.
    fn verify(&self, inst: &Instance) -> Result<()> {
        let [a, b, c, d] = inst.tuple;
        let fresh = solver::holds(self.cs, a, b, c, d)?;
        if fresh.holds != inst.holds {
            return Err(Error::Unsupported(format!(
                "verdict for {:?} changed on recomputation",
                inst.tuple
            )));
        }
        Ok(())
    }
}

pub fn check_axiom(cs: &ClassSet, axiom: Axiom) -> Result<AxiomReport> {
    Auditor::new(cs)?.check(axiom)
}

pub fn check_all(cs: &ClassSet) -> Result<Vec<AxiomReport>> {
    let mut auditor = Auditor::new(cs)?;
    Axiom::ALL.into_iter().map(|a| auditor.check(a)).collect()
}

/// Central permutation and strong reflexivity together force strong
/// determinism. Returns false if a set of reports contradicts that.
pub fn consistent(reports: &[AxiomReport]) -> bool {
    let verdict = |ax| reports.iter().find(|r| r.axiom == ax).map(|r| r.verdict);
    let ok = Some(Verdict::HoldsExhaustively);
    !(verdict(Axiom::CentralPermutation) == ok
        && verdict(Axiom::StrongReflexivity) == ok
        && verdict(Axiom::StrongDeterminism) == Some(Verdict::Fails))
}
