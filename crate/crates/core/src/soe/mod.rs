//! Second occurrence expressions.
//!
//! Source and target clause share an anaphor semantics `An`:
//!
//! ```text
//! An(SP1)...(SPn) = SSem
//! An(TP1)...(TPn) = TSem
//! Gd(F1)...(Fk)   = VP'
//! ```
//!
//! `TSem` is a template whose focus semantic value `Gd` is unknown, and the
//! last equation recovers the target's foci. `Gd` and the foci start out
//! with type variables, so the equations are solved by a scheduler that
//! delays each one until its unknowns have concrete types.

mod schedule;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::focus::{FocusError, GroundEquation};
use crate::logic;
use crate::normalize::normalize;
use crate::syntax::format_term;
use crate::term::{Term, Var};
use crate::types::{Type, TypeError};
use crate::typing::{infer_concrete, infer_type};
use crate::unify::{Limit, SearchLimits, UnifyError};

pub use schedule::schedule_solve;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SoeError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Unify(UnifyError),
    #[error(transparent)]
    Focus(FocusError),
    #[error("at least one pair of parallel elements is required")]
    NoParallelPairs,
    #[error("`{0}` must be closed")]
    NotClosed(String),
    #[error("no solution")]
    NoSolution,
    #[error("no equation can be solved: unknowns without concrete types remain")]
    Deadlock,
    #[error("search limit exceeded ({0})")]
    LimitExceeded(Limit),
}

impl From<UnifyError> for SoeError {
    fn from(e: UnifyError) -> Self {
        match e {
            UnifyError::LimitExceeded(l) => SoeError::LimitExceeded(l),
            UnifyError::Type(t) => SoeError::Type(t),
            other => SoeError::Unify(other),
        }
    }
}

impl From<FocusError> for SoeError {
    fn from(e: FocusError) -> Self {
        match e {
            FocusError::Type(t) => SoeError::Type(t),
            FocusError::NotClosed(s) => SoeError::NotClosed(s),
            FocusError::LimitExceeded(l) => SoeError::LimitExceeded(l),
            FocusError::NoSolution => SoeError::NoSolution,
            other => SoeError::Focus(other),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SoeProblem {
    pub source_sem: Term,
    /// `(SPi, TPi)`
    pub parallel_pairs: Vec<(Term, Term)>,
    /// Target semantics with the unknown focus semantic value as a free
    /// variable inside `alt_n(...)`.
    pub template: Term,
}

#[derive(Clone, Debug)]
pub struct SoeEquation {
    pub lhs: Term,
    pub rhs: Term,
    /// Primary occurrence data, present for the source equation.
    pub ground: Option<GroundEquation>,
}

impl fmt::Display for SoeEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", format_term(&self.lhs), format_term(&self.rhs))
    }
}

/// The equations of an SOE problem and the unknowns they mention.
#[derive(Clone, Debug)]
pub struct SoeSystem {
    pub equations: Vec<SoeEquation>,
    pub an_var: Var,
    pub gd_var: Option<Var>,
    pub focus_vars: Vec<Var>,
    pub template: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoeResult {
    pub an: Term,
    pub gd: Option<Term>,
    pub foci: Vec<Term>,
    pub target_sem: Term,
    /// Equations in the order they were solved, as handed to the solver.
    pub steps: Vec<(Term, Term)>,
    /// The system's equations with all type variables resolved.
    pub equations: Vec<(Term, Term)>,
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    std::iter::once(base.to_string())
        .chain((1..).map(|i| format!("{base}{i}")))
        .find(|n| !taken.contains(n))
        .expect("unbounded name supply")
}

/// Finds the free head `Gd` of the first `alt_n(Gd)` in the template.
fn find_gd(t: &Term) -> Option<(Var, usize)> {
    t.positions(&|s| {
        let (h, args) = s.head_args();
        match (h, args.as_slice()) {
            (Term::Const(c), [arg]) => {
                matches!(logic::Builtin::from_name(&c.name), Some(logic::Builtin::Alt(_)))
                    && matches!(arg.strip_binders().1.head_args().0, Term::Free(_))
            }
            _ => false,
        }
    })
    .first()
    .and_then(|p| t.subterm_at(p))
    .map(|s| {
        let (h, args) = s.head_args();
        let Term::Const(c) = h else { unreachable!() };
        let Some(logic::Builtin::Alt(n)) = logic::Builtin::from_name(&c.name) else { unreachable!() };
        let Term::Free(v) = args[0].strip_binders().1.head_args().0 else { unreachable!() };
        (v.clone(), n)
    })
}

/// The second argument of the first `eq` literal whose second argument is
/// closed.
fn find_vp(t: &Term) -> Option<Term> {
    let is_eq = |s: &Term| {
        let (h, args) = s.head_args();
        matches!(h, Term::Const(c) if c.name == logic::EQ) && args.len() == 2 && args[1].is_closed()
    };
    let path = t.positions(&is_eq).into_iter().next()?;
    let s = t.subterm_at(&path)?;
    Some(s.head_args().1[1].clone())
}

pub fn build_soe_equations(p: &SoeProblem) -> Result<SoeSystem, SoeError> {
    if p.parallel_pairs.is_empty() {
        return Err(SoeError::NoParallelPairs);
    }
    if !p.source_sem.is_closed() {
        return Err(SoeError::NotClosed(format_term(&p.source_sem)));
    }
    for (sp, tp) in &p.parallel_pairs {
        let st = infer_concrete(sp)?;
        let tt = infer_concrete(tp)?;
        if st != tt {
            return Err(TypeError::Mismatch { expected: st, found: tt }.into());
        }
        if !tp.is_closed() {
            return Err(SoeError::NotClosed(format_term(tp)));
        }
    }
    let source_ty = infer_concrete(&p.source_sem)?;
    let template_ty = infer_type(&p.template)?;
    let mut tys = crate::types::TypeSubst::new();
    tys.unify(&source_ty, &template_ty)?;
    let template = p.template.resolve_types(&tys);

    let mut taken = BTreeSet::new();
    p.source_sem.symbol_names(&mut taken);
    template.symbol_names(&mut taken);
    for (sp, tp) in &p.parallel_pairs {
        sp.symbol_names(&mut taken);
        tp.symbol_names(&mut taken);
    }
    let an_name = fresh_name("An", &taken);
    taken.insert(an_name.clone());
    let sps: Vec<Term> = p.parallel_pairs.iter().map(|(sp, _)| sp.clone()).collect();
    let ground = GroundEquation::build(&p.source_sem, &sps, &an_name)?;
    let an_var = ground.gd_var.clone();

    let mut equations = vec![
        SoeEquation { lhs: ground.lhs(), rhs: ground.sem.clone(), ground: Some(ground) },
        SoeEquation {
            lhs: Term::apply(Term::Free(an_var.clone()), p.parallel_pairs.iter().map(|(_, tp)| tp.clone())),
            rhs: normalize(&template),
            ground: None,
        },
    ];

    let mut gd_var = None;
    let mut focus_vars = Vec::new();
    if let (Some((gd, n)), Some(vp)) = (find_gd(&template), find_vp(&template)) {
        let (args, _) = gd.ty.uncurry();
        let arg_types: Vec<Type> = args.into_iter().take(n).cloned().collect();
        for (i, ty) in arg_types.into_iter().enumerate() {
            let base = if n == 1 { "F".to_string() } else { format!("F{}", i + 1) };
            let name = fresh_name(&base, &taken);
            taken.insert(name.clone());
            focus_vars.push(Var { name, ty });
        }
        equations.push(SoeEquation {
            lhs: Term::apply(Term::Free(gd.clone()), focus_vars.iter().cloned().map(Term::Free)),
            rhs: normalize(&vp),
            ground: None,
        });
        gd_var = Some(gd);
    }
    Ok(SoeSystem { equations, an_var, gd_var, focus_vars, template })
}

/// Builds the equations and solves them.
pub fn resolve_soe(p: &SoeProblem, lim: &SearchLimits, mode: crate::focus::PorMode) -> Result<Vec<SoeResult>, SoeError> {
    let sys = build_soe_equations(p)?;
    schedule_solve(&sys, lim, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::syntax::parse_term;

    pub(crate) fn sig() -> Signature {
        let mut s = Signature::with_consts(&[("l", "e>e>t"), ("j", "e"), ("p", "e"), ("m", "e"), ("s", "e")])
            .unwrap();
        s.declare_meta("Gd", None).unwrap();
        s
    }

    pub(crate) fn term(src: &str) -> Term {
        parse_term(src, &sig()).unwrap()
    }

    pub(crate) const SOURCE: &str =
        "forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. l(x,y))), P(j)), eq(P, lam x:e. l(x,m))))";
    pub(crate) const TEMPLATE: &str = "forall(lam P:e>t. imp(and(in(P, alt1(Gd)), P(p)), eq(P, lam x:e. l(x,m))))";

    pub(crate) fn correction() -> SoeProblem {
        SoeProblem {
            source_sem: term(SOURCE),
            parallel_pairs: vec![(term("j"), term("p"))],
            template: term(TEMPLATE),
        }
    }

    #[test]
    fn three_equations() {
        let sys = build_soe_equations(&correction()).unwrap();
        assert_eq!(sys.equations.len(), 3);
        assert_eq!(sys.an_var.name, "An");
        assert_eq!(sys.an_var.ty, Type::arrow(Type::e(), Type::t()));
        assert_eq!(sys.gd_var.as_ref().unwrap().name, "Gd");
        assert_eq!(sys.focus_vars.len(), 1);
        assert_eq!(sys.focus_vars[0].name, "F");
        assert!(!sys.focus_vars[0].ty.is_concrete());

        let shown: Vec<String> = sys.equations.iter().map(ToString::to_string).collect();
        assert_eq!(
            shown[0],
            "An(j) = forall(lam y:e>t. imp(and(in(lam x:e. y(x),alt1(lam x:e. lam z:e. l(z,x))),y(j)),\
             eq(lam x:e. y(x),lam x:e. l(x,m))))"
        );
        assert!(shown[1].starts_with("An(p) = forall("));
        assert_eq!(shown[2], "Gd(F) = lam y:e. l(y,m)");
    }

    #[test]
    fn degenerate_first_order_pair() {
        let p = SoeProblem {
            source_sem: term("l(j,m)"),
            parallel_pairs: vec![(term("j"), term("p"))],
            template: term("l(p,m)"),
        };
        let sys = build_soe_equations(&p).unwrap();
        assert_eq!(sys.equations.len(), 2);
        assert!(sys.gd_var.is_none());
    }

    #[test]
    fn mismatched_parallel_types() {
        let p = SoeProblem {
            source_sem: term("l(j,m)"),
            parallel_pairs: vec![(term("j"), term("lam x:e. l(x,m)"))],
            template: term("l(p,m)"),
        };
        assert!(matches!(build_soe_equations(&p), Err(SoeError::Type(_))));
    }

    #[test]
    fn no_pairs() {
        let p = SoeProblem { source_sem: term("l(j,m)"), parallel_pairs: vec![], template: term("l(p,m)") };
        assert_eq!(build_soe_equations(&p).unwrap_err(), SoeError::NoParallelPairs);
    }
}
