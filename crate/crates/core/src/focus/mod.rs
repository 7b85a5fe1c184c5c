//! Focus semantic values.
//!
//! For a semantics `Sem` with foci `F1..Fn` the ground equation
//! `Gd(F1)...(Fn) = Sem` is solved by higher-order matching. Each surviving
//! value of `Gd` determines the focus semantic value
//! `{ Gd(t1)...(tn) | ti a term of the i-th focus type }`, which is kept
//! intensionally as the pair `(Gd, n)` and never enumerated.

mod chain;
mod operators;
mod por;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::normalize::normalize;
use crate::signature::Signature;
use crate::subst::Substitution;
use crate::syntax::format_term;
use crate::term::{Path, Term, Var};
use crate::types::{Type, TypeError};
use crate::typing::infer_concrete;
use crate::unify::{ho_match, Limit, Problem, SearchLimits, Solutions, UnifyError};

pub use chain::{analyze_operator_chain, ChainAnalysis, ChainStage, Operator};
pub use operators::{interpret_also, interpret_only};
pub use por::por_filter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FocusError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Unify(UnifyError),
    #[error("focus `{0}` does not occur in the semantics")]
    FocusAbsent(String),
    #[error("`{0}` must be closed")]
    NotClosed(String),
    #[error("no solution")]
    NoSolution,
    #[error("search limit exceeded ({0})")]
    LimitExceeded(Limit),
}

impl From<UnifyError> for FocusError {
    fn from(e: UnifyError) -> Self {
        match e {
            UnifyError::LimitExceeded(l) => FocusError::LimitExceeded(l),
            UnifyError::Type(t) => FocusError::Type(t),
            other => FocusError::Unify(other),
        }
    }
}

/// How the primary occurrence restriction filters ground-equation solutions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PorMode {
    /// Every primary occurrence must be abstracted; other occurrences of the
    /// focus are unconstrained.
    #[default]
    Dsp,
    /// As `Dsp`, and nothing but the primary occurrences may be abstracted.
    Strict,
    Off,
}

impl FromStr for PorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dsp" => Ok(PorMode::Dsp),
            "strict" => Ok(PorMode::Strict),
            "off" => Ok(PorMode::Off),
            other => Err(format!("unknown POR mode `{other}` (expected dsp, strict or off)")),
        }
    }
}

impl fmt::Display for PorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PorMode::Dsp => "dsp",
            PorMode::Strict => "strict",
            PorMode::Off => "off",
        })
    }
}

/// `gd_var(F1)...(Fn) = sem`.
#[derive(Clone, Debug)]
pub struct GroundEquation {
    /// Normal form of the semantics, primary marks kept.
    pub sem: Term,
    pub foci: Vec<Term>,
    pub gd_var: Var,
    /// Positions in `sem` of primary occurrences, with the focus index.
    pub primary_positions: Vec<(Path, usize)>,
}

impl GroundEquation {
    /// Sets up the equation with an explicitly named ground variable.
    ///
    /// A focus occurrence is primary when it carries a `^` mark; a focus
    /// with no marked occurrence has all of its occurrences primary.
    pub fn build(sem: &Term, foci: &[Term], gd_name: &str) -> Result<GroundEquation, FocusError> {
        if !sem.is_closed() {
            return Err(FocusError::NotClosed(format_term(sem)));
        }
        let sem_ty = infer_concrete(sem)?;
        let sem = normalize(sem);
        let mut arg_types = Vec::new();
        let mut norm_foci = Vec::new();
        let mut primary_positions = Vec::new();
        for (i, focus) in foci.iter().enumerate() {
            if !focus.is_closed() {
                return Err(FocusError::NotClosed(format_term(focus)));
            }
            arg_types.push(infer_concrete(focus)?);
            let focus = normalize(&focus.strip_primary());
            let occurrences = sem.positions(&|t| *t == focus);
            if occurrences.is_empty() {
                return Err(FocusError::FocusAbsent(format_term(&focus)));
            }
            let marked: Vec<Path> = occurrences
                .iter()
                .filter(|p| sem.subterm_at(p).is_some_and(Term::has_primary))
                .cloned()
                .collect();
            let chosen = if marked.is_empty() { occurrences } else { marked };
            primary_positions.extend(chosen.into_iter().map(|p| (p, i)));
            norm_foci.push(focus);
        }
        let gd_var = Var { name: gd_name.to_string(), ty: Type::curried(arg_types, sem_ty) };
        Ok(GroundEquation { sem, foci: norm_foci, gd_var, primary_positions })
    }

    pub fn arity(&self) -> usize {
        self.foci.len()
    }

    pub fn argument_types(&self) -> Vec<Type> {
        let (args, _) = self.gd_var.ty.uncurry();
        args.into_iter().take(self.arity()).cloned().collect()
    }

    /// `Gd(F1)...(Fn)`
    pub fn lhs(&self) -> Term {
        Term::apply(Term::Free(self.gd_var.clone()), self.foci.iter().cloned())
    }

    pub fn problem(&self) -> Result<Problem, FocusError> {
        Ok(Problem::single(self.lhs(), self.sem.clone())?)
    }
}

impl fmt::Display for GroundEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", format_term(&self.lhs()), format_term(&self.sem))
    }
}

/// Builds the ground equation with a fresh variable `Gd` (or `Gd1`, ...
/// when the signature already uses that name).
pub fn build_ground_equation(sem: &Term, foci: &[Term], sig: &Signature) -> Result<GroundEquation, FocusError> {
    let name = std::iter::once("Gd".to_string())
        .chain((1..).map(|i| format!("Gd{i}")))
        .find(|n| !sig.is_declared(n))
        .expect("unbounded name supply");
    GroundEquation::build(sem, foci, &name)
}

/// Focus semantic value, represented by the ground value and its arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsv {
    pub gd: Term,
    pub arity: usize,
    pub argument_types: Vec<Type>,
}

impl Fsv {
    pub fn new(gd: Term, arity: usize) -> Result<Fsv, FocusError> {
        if !gd.is_closed() {
            return Err(FocusError::NotClosed(format_term(&gd)));
        }
        let ty = infer_concrete(&gd)?;
        let (args, _) = ty.uncurry();
        if args.len() < arity {
            return Err(FocusError::Type(TypeError::NotAFunction(ty.clone())));
        }
        let argument_types = args.into_iter().take(arity).cloned().collect();
        Ok(Fsv { gd: normalize(&gd), arity, argument_types })
    }

    /// Type of the set's elements.
    pub fn element_type(&self) -> Type {
        let ty = infer_concrete(&self.gd).expect("checked on construction");
        let mut ty = &ty;
        for _ in 0..self.arity {
            match ty {
                Type::Arrow(_, b) => ty = b,
                _ => unreachable!("arity checked on construction"),
            }
        }
        ty.clone()
    }
}

/// Solves the ground equation, applies the primary occurrence restriction
/// and wraps each surviving value of the ground variable.
pub fn solve_fsv(geq: &GroundEquation, lim: &SearchLimits, mode: PorMode) -> Result<Solutions<Fsv>, FocusError> {
    let candidates = ground_candidates(geq, lim)?;
    let kept = por_filter(&candidates.items, geq, mode);
    if kept.is_empty() {
        return Err(match candidates.truncated {
            Some(l @ (Limit::Depth | Limit::Nodes)) => FocusError::LimitExceeded(l),
            _ => FocusError::NoSolution,
        });
    }
    let items = kept
        .iter()
        .map(|s| Fsv::new(s.get(&geq.gd_var.name).expect("matcher binds Gd").clone(), geq.arity()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Solutions { items, truncated: candidates.truncated })
}

/// All matchers of the ground equation, before filtering.
pub fn ground_candidates(geq: &GroundEquation, lim: &SearchLimits) -> Result<Solutions<Substitution>, FocusError> {
    Ok(ho_match(&geq.problem()?, lim)?)
}

/// Decides membership of `candidate` in the focus semantic value by
/// matching `gd(X1)...(Xn)` against it. Returns the witnesses `X1..Xn` of
/// the first matcher; an argument that `gd` ignores is returned as its
/// unconstrained variable.
pub fn fsv_member(fsv: &Fsv, candidate: &Term, lim: &SearchLimits) -> Result<Option<Vec<Term>>, FocusError> {
    if !candidate.is_closed() {
        return Err(FocusError::NotClosed(format_term(candidate)));
    }
    let cty = infer_concrete(candidate)?;
    let ety = fsv.element_type();
    if cty != ety {
        return Err(FocusError::Type(TypeError::Mismatch { expected: ety, found: cty }));
    }
    let mut taken = std::collections::BTreeSet::new();
    fsv.gd.symbol_names(&mut taken);
    candidate.symbol_names(&mut taken);
    let witnesses: Vec<Term> = fsv
        .argument_types
        .iter()
        .enumerate()
        .map(|(i, ty)| {
            let name = (0..)
                .map(|k| if k == 0 { format!("_T{}", i + 1) } else { format!("_T{}_{k}", i + 1) })
                .find(|n| !taken.contains(n))
                .expect("unbounded name supply");
            Term::free(&name, ty.clone())
        })
        .collect();
    let lhs = Term::apply(fsv.gd.clone(), witnesses.iter().cloned());
    let problem = Problem::single(lhs, candidate.clone())?;
    let sols = match ho_match(&problem, lim) {
        Ok(s) => s,
        Err(UnifyError::LimitExceeded(_)) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    Ok(sols.items.first().map(|sigma| witnesses.iter().map(|w| normalize(&sigma.apply(w))).collect()))
}
