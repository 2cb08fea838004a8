//! Analogical proportions over finite partial algebras.
//!
//! Terms over a first-order language induce functions on each algebra of a
//! source/target pair. The [`clone`] engine enumerates those functions up to
//! extensional equality, [`justification`] collects the rewrite pairs that
//! witness a proportion `a:b::c:d`, and [`solver`] picks the targets whose
//! justification sets are maximal under inclusion. Every verdict is relative
//! to the enumeration [`Bounds`] it was computed under.

pub mod algebra;
pub mod axioms;
pub mod baselines;
pub mod builtins;
pub mod clone;
pub mod error;
pub mod justification;
pub mod lang;
pub mod naive;
pub mod solver;
pub mod specfile;

pub use algebra::{AlgebraPair, Codec, ElemId, Element, PartialAlgebra, UNDEF};
pub use clone::{Bounds, ClassId, ClassSet, TermClass};
pub use error::{Error, Result};
pub use justification::{Characteristic, JusSet, Justification};
pub use lang::{parse_query, parse_term, Language, ProportionQuery, Term};
pub use solver::{holds, solve, HoldsReport, SolutionReport};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use crate::algebra::{AlgebraPair, PartialAlgebra};
    use crate::builtins::{builtin, Params};
    use crate::clone::{Bounds, ClassSet};
    use crate::lang::{parse_term, Term};

    pub fn algebra(kind: &str, params: &[(&str, &str)]) -> Arc<PartialAlgebra> {
        let params: Params = params
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Arc::new(builtin(kind, kind, &params).unwrap())
    }

    pub fn classes(alg: &Arc<PartialAlgebra>, k: usize, d: usize, cap: usize) -> ClassSet {
        ClassSet::enumerate(&AlgebraPair::single(alg.clone()), Bounds::new(k, d, cap)).unwrap()
    }

    pub fn term(alg: &PartialAlgebra, text: &str) -> Term {
        parse_term(text, alg.language()).unwrap()
    }
}
