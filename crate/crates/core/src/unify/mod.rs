//! Huet-style pre-unification and higher-order matching.
//!
//! The search alternates SIMPL (rigid-rigid decomposition) with MATCH
//! (imitation and projection bindings for the first flex-rigid pair) and is
//! bounded by iterative deepening. In a matching problem (every right side
//! closed) imitations and first-order projections shrink the problem, so
//! only projections onto functional arguments count against the depth
//! bound; in general unification every MATCH step counts.

mod bindings;
mod enumerate;
mod search;
mod simplify;

use std::fmt;

use thiserror::Error;

use crate::normalize::normalize;
use crate::subst::Substitution;
use crate::term::{Term, Var};
use crate::types::TypeError;
use crate::typing::infer_concrete;

pub use bindings::{match_bindings, Binding, BindingKind, FreshNames};
pub use enumerate::enumerate_ground_terms;
pub use search::{ho_match, pre_unify};
pub use simplify::{simplify, Simplified};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("sides have different types: {left} vs {right}")]
    SideTypes { left: String, right: String },
    #[error("problem contains type variables; solve it through the scheduler")]
    TypeVariables,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("search limit exceeded ({0})")]
    LimitExceeded(Limit),
}

/// Which bound stopped a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    Depth,
    Nodes,
    Solutions,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limit::Depth => "max depth",
            Limit::Nodes => "max nodes",
            Limit::Solutions => "max solutions",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Bound on counted MATCH steps along one branch.
    pub max_depth: usize,
    pub max_solutions: usize,
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_depth: 8, max_solutions: 50, max_nodes: 100_000 }
    }
}

impl SearchLimits {
    pub fn with_depth(max_depth: usize) -> Self {
        SearchLimits { max_depth, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), UnifyError> {
        if self.max_depth == 0 || self.max_solutions == 0 || self.max_nodes == 0 {
            return Err(UnifyError::PreconditionViolated("search limits must be positive".into()));
        }
        Ok(())
    }
}

/// Results of a bounded search. `truncated` is set when some bound cut the
/// search short, so more solutions may exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solutions<T> {
    pub items: Vec<T>,
    pub truncated: Option<Limit>,
}

impl<T> Solutions<T> {
    pub fn map<U>(self, f: impl FnMut(T) -> U) -> Solutions<U> {
        Solutions { items: self.items.into_iter().map(f).collect(), truncated: self.truncated }
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub substitution: Substitution,
    pub residual_flex_flex: Vec<(Term, Term)>,
}

/// A list of equations `left = right` over closed-over-binders terms.
#[derive(Clone, Debug)]
pub struct Problem {
    pairs: Vec<(Term, Term)>,
}

impl Problem {
    /// Type-checks and normalizes the pairs. Both sides of a pair must have
    /// the same, fully known type.
    pub fn new(pairs: Vec<(Term, Term)>) -> Result<Problem, UnifyError> {
        let mut out = Vec::with_capacity(pairs.len());
        for (l, r) in pairs {
            if l.has_type_vars() || r.has_type_vars() {
                return Err(UnifyError::TypeVariables);
            }
            let lt = infer_concrete(&l)?;
            let rt = infer_concrete(&r)?;
            if lt != rt {
                return Err(UnifyError::SideTypes { left: lt.to_string(), right: rt.to_string() });
            }
            out.push((normalize(&l), normalize(&r)));
        }
        Ok(Problem { pairs: out })
    }

    pub fn single(left: Term, right: Term) -> Result<Problem, UnifyError> {
        Problem::new(vec![(left, right)])
    }

    pub fn pairs(&self) -> &[(Term, Term)] {
        &self.pairs
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for (l, r) in &self.pairs {
            for v in l.free_var_list().into_iter().chain(r.free_var_list()) {
                if !out.iter().any(|w| w.name == v.name) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// True when every right side is closed, i.e. the problem is matching.
    pub fn is_matching(&self) -> bool {
        self.pairs.iter().all(|(_, r)| r.is_closed())
    }
}

/// Highest order among the problem's free-variable types.
pub fn check_order(p: &Problem) -> usize {
    p.free_vars()
        .iter()
        .map(|v| v.ty.order().expect("problem types are concrete"))
        .max()
        .unwrap_or(0)
}

/// True iff σ makes both sides of every pair βη-equal.
pub fn verify(sigma: &Substitution, p: &Problem) -> bool {
    p.pairs
        .iter()
        .all(|(l, r)| normalize(&sigma.apply(l)) == normalize(&sigma.apply(r)))
}
