use std::collections::BTreeMap;

use crate::focus::{por_filter, PorMode};
use crate::normalize::normalize;
use crate::subst::Substitution;
use crate::term::Term;
use crate::types::{Type, TypeError, TypeSubst};
use crate::unify::{ho_match, pre_unify, Limit, Problem, SearchLimits, UnifyError};

use super::{SoeEquation, SoeError, SoeResult, SoeSystem};

/// Unifies the types of constants and binders that face each other in the
/// rigid skeletons of `s` and `t`.
fn align(s: &Term, t: &Term, tys: &mut TypeSubst) -> Result<(), TypeError> {
    if let (Term::Abs(a, x), Term::Abs(b, y)) = (s, t) {
        tys.unify(&a.ty, &b.ty)?;
        return align(x, y, tys);
    }
    let (h1, a1) = s.head_args();
    let (h2, a2) = t.head_args();
    if a1.len() != a2.len() {
        return Ok(());
    }
    match (h1, h2) {
        (Term::Const(c), Term::Const(d)) if c.name == d.name => tys.unify(&c.ty, &d.ty)?,
        (Term::Bound(i), Term::Bound(j)) if i == j => {}
        _ => return Ok(()),
    }
    for (x, y) in a1.into_iter().zip(a2) {
        align(x, y, tys)?;
    }
    Ok(())
}

/// Propagates type information across all equations: facing constants are
/// aligned and every occurrence of a free variable gets one type.
fn infer_types(eqs: &[SoeEquation], tys: &mut TypeSubst) -> Result<(), TypeError> {
    let mut seen: BTreeMap<String, Type> = BTreeMap::new();
    for eq in eqs {
        align(&eq.lhs, &eq.rhs, tys)?;
        for v in eq.lhs.free_var_list().into_iter().chain(eq.rhs.free_var_list()) {
            match seen.get(&v.name) {
                Some(ty) => tys.unify(ty, &v.ty)?,
                None => {
                    seen.insert(v.name, v.ty);
                }
            }
        }
    }
    Ok(())
}

fn concrete(eq: &SoeEquation) -> bool {
    !eq.lhs.has_type_vars() && !eq.rhs.has_type_vars()
}

struct Scheduler<'a> {
    sys: &'a SoeSystem,
    lim: &'a SearchLimits,
    mode: PorMode,
    results: Vec<SoeResult>,
    limit_hit: Option<Limit>,
    deadlock: bool,
}

impl Scheduler<'_> {
    fn run(&mut self, eqs: Vec<SoeEquation>, sigma: Substitution, tys: TypeSubst, steps: Vec<(Term, Term)>) {
        if self.results.len() >= self.lim.max_solutions {
            self.limit_hit.get_or_insert(Limit::Solutions);
            return;
        }
        let mut tys = tys;
        if infer_types(&eqs, &mut tys).is_err() {
            return;
        }
        let mut pending = Vec::new();
        for eq in eqs {
            let lhs = normalize(&eq.lhs.resolve_types(&tys));
            let rhs = normalize(&eq.rhs.resolve_types(&tys));
            if lhs.is_closed() && rhs.is_closed() {
                if lhs != rhs {
                    return;
                }
                continue;
            }
            let ground = eq.ground.filter(|g| g.lhs() == lhs && g.sem == rhs);
            pending.push(SoeEquation { lhs, rhs, ground });
        }
        if pending.is_empty() {
            self.record(&sigma, &tys, steps);
            return;
        }

        let ready = pending
            .iter()
            .position(|eq| concrete(eq) && (eq.lhs.is_closed() || eq.rhs.is_closed()));
        let (idx, matching) = match ready {
            Some(i) => (i, true),
            None => match pending.iter().position(concrete) {
                Some(i) => (i, false),
                None => {
                    self.deadlock = true;
                    return;
                }
            },
        };
        let eq = pending.remove(idx);
        let (lhs, rhs) = if eq.lhs.is_closed() { (eq.rhs.clone(), eq.lhs.clone()) } else { (eq.lhs.clone(), eq.rhs.clone()) };
        let Ok(problem) = Problem::single(lhs.clone(), rhs.clone()) else {
            return;
        };
        let solved: Result<Vec<Substitution>, UnifyError> = if matching {
            ho_match(&problem, self.lim).map(|s| match &eq.ground {
                Some(g) => por_filter(&s.items, g, self.mode),
                None => s.items,
            })
        } else {
            pre_unify(&problem, self.lim).map(|s| {
                s.items
                    .into_iter()
                    .filter(|sol| sol.residual_flex_flex.is_empty())
                    .map(|sol| sol.substitution)
                    .collect()
            })
        };
        let thetas = match solved {
            Ok(t) => t,
            Err(UnifyError::LimitExceeded(l)) => {
                self.limit_hit.get_or_insert(l);
                return;
            }
            Err(_) => return,
        };
        let mut steps = steps;
        steps.push((lhs, rhs));
        for theta in thetas {
            let rest: Vec<SoeEquation> = pending
                .iter()
                .map(|e| SoeEquation {
                    lhs: normalize(&theta.apply(&e.lhs)),
                    rhs: normalize(&theta.apply(&e.rhs)),
                    ground: e.ground.clone(),
                })
                .collect();
            let next = sigma.then(&theta);
            self.run(rest, next, tys.clone(), steps.clone());
        }
    }

    fn record(&mut self, sigma: &Substitution, tys: &TypeSubst, steps: Vec<(Term, Term)>) {
        let resolve = |v: &crate::term::Var| {
            let t = Term::Free(crate::term::Var { name: v.name.clone(), ty: tys.apply(&v.ty) });
            normalize(&sigma.apply(&t))
        };
        let result = SoeResult {
            an: resolve(&self.sys.an_var),
            gd: self.sys.gd_var.as_ref().map(resolve),
            foci: self.sys.focus_vars.iter().map(resolve).collect(),
            target_sem: normalize(&sigma.apply(&self.sys.template.resolve_types(tys))),
            steps,
            equations: self
                .sys
                .equations
                .iter()
                .map(|e| (normalize(&e.lhs.resolve_types(tys)), normalize(&e.rhs.resolve_types(tys))))
                .collect(),
        };
        if !self.results.iter().any(|r| r.an == result.an && r.gd == result.gd && r.foci == result.foci) {
            self.results.push(result);
        }
    }
}

/// Solves the equations one at a time. An equation is taken up once all of
/// its unknowns have concrete types and one side is closed; it is then
/// solved by matching, with the primary occurrence restriction applied to
/// the source equation. When only open equations with concrete types
/// remain, the first is pre-unified and solutions leaving flex-flex pairs
/// are dropped.
pub fn schedule_solve(sys: &SoeSystem, lim: &SearchLimits, mode: PorMode) -> Result<Vec<SoeResult>, SoeError> {
    lim.validate()?;
    let mut s = Scheduler { sys, lim, mode, results: Vec::new(), limit_hit: None, deadlock: false };
    s.run(sys.equations.clone(), Substitution::new(), TypeSubst::new(), Vec::new());
    if !s.results.is_empty() {
        return Ok(s.results);
    }
    Err(match s.limit_hit {
        Some(l @ (Limit::Depth | Limit::Nodes)) => SoeError::LimitExceeded(l),
        _ if s.deadlock => SoeError::Deadlock,
        _ => SoeError::NoSolution,
    })
}
