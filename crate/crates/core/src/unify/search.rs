use std::collections::BTreeSet;

use crate::normalize::normalize;
use crate::subst::Substitution;
use crate::term::{Term, Var};

use super::bindings::{match_bindings, BindingKind, FreshNames};
use super::simplify::{simplify_pairs, Simplified};
use super::{Limit, Problem, SearchLimits, Solution, Solutions, UnifyError};

struct Search {
    limits: SearchLimits,
    vars: Vec<String>,
    fresh: FreshNames,
    nodes: usize,
    /// Some branch was pruned by the current depth bound.
    cut: bool,
    stopped: Option<Limit>,
    found: Vec<Solution>,
}

impl Search {
    fn new(p: &Problem, limits: SearchLimits) -> Search {
        let mut names = BTreeSet::new();
        for (l, r) in p.pairs() {
            l.symbol_names(&mut names);
            r.symbol_names(&mut names);
        }
        Search {
            limits,
            vars: p.free_vars().into_iter().map(|v| v.name).collect(),
            fresh: FreshNames::avoiding(names),
            nodes: 0,
            cut: false,
            stopped: None,
            found: Vec::new(),
        }
    }

    fn record(&mut self, subst: &Substitution, residual: Vec<(Term, Term)>) {
        let sol = Solution {
            substitution: subst.restrict(self.vars.iter().map(String::as_str)),
            residual_flex_flex: residual,
        };
        if !self.found.contains(&sol) {
            self.found.push(sol);
        }
    }

    /// Returns true when the whole search must stop.
    fn dfs(&mut self, pairs: Vec<(Term, Term)>, subst: Substitution, cost: usize, bound: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            self.stopped = Some(Limit::Nodes);
            return true;
        }
        let (flex_rigid, flex_flex) = match simplify_pairs(pairs) {
            Simplified::Failure => return false,
            Simplified::Simplified { flex_rigid, flex_flex } => (flex_rigid, flex_flex),
        };
        if flex_rigid.is_empty() {
            self.record(&subst, flex_flex);
            if self.found.len() >= self.limits.max_solutions {
                self.stopped = Some(Limit::Solutions);
                return true;
            }
            return false;
        }
        let matching = flex_flex.is_empty() && flex_rigid.iter().all(|(_, r)| r.is_closed());
        let (flex, rigid) = &flex_rigid[0];
        let Term::Free(var) = flex.strip_binders().1.head_args().0 else {
            unreachable!("flex side has a free head")
        };
        let var: Var = var.clone();
        let rigid_head = rigid.strip_binders().1.head_args().0.clone();
        for b in match_bindings(&var, &rigid_head, &mut self.fresh) {
            let free_step = matching
                && match b.kind {
                    BindingKind::Imitation => true,
                    BindingKind::Projection(_) => !b.higher_order,
                };
            let next_cost = cost + usize::from(!free_step);
            if next_cost > bound {
                self.cut = true;
                continue;
            }
            let single = b.substitution();
            let next_pairs: Vec<(Term, Term)> = flex_rigid
                .iter()
                .chain(flex_flex.iter())
                .map(|(l, r)| (rewrite(&single, &var.name, l), rewrite(&single, &var.name, r)))
                .collect();
            let mut next_subst = subst.clone();
            next_subst.bind(&b.var, &b.term);
            if self.dfs(next_pairs, next_subst, next_cost, bound) {
                return true;
            }
        }
        false
    }

    /// Iterative deepening over the counted MATCH steps. Solutions are
    /// reported in order of discovery: shallower first, then depth-first
    /// order with imitation before projections.
    fn run(mut self, p: &Problem) -> Solutions<Solution> {
        for bound in 0..=self.limits.max_depth {
            self.cut = false;
            self.fresh.reset();
            if self.dfs(p.pairs().to_vec(), Substitution::new(), 0, bound) {
                break;
            }
            if !self.cut {
                break;
            }
            if bound == self.limits.max_depth {
                self.stopped = Some(Limit::Depth);
            }
        }
        Solutions { items: self.found, truncated: self.stopped }
    }
}

fn rewrite(single: &Substitution, var: &str, t: &Term) -> Term {
    if t.free_vars().contains(var) {
        normalize(&single.apply(t))
    } else {
        t.clone()
    }
}

fn finish<T>(s: Solutions<T>) -> Result<Solutions<T>, UnifyError> {
    match s.truncated {
        Some(limit @ (Limit::Depth | Limit::Nodes)) if s.items.is_empty() => Err(UnifyError::LimitExceeded(limit)),
        _ => Ok(s),
    }
}

/// Huet pre-unification. Flex-flex pairs are returned as residuals.
pub fn pre_unify(p: &Problem, lim: &SearchLimits) -> Result<Solutions<Solution>, UnifyError> {
    lim.validate()?;
    finish(Search::new(p, *lim).run(p))
}

/// Higher-order matching: every right side must be closed.
pub fn ho_match(p: &Problem, lim: &SearchLimits) -> Result<Solutions<Substitution>, UnifyError> {
    lim.validate()?;
    if let Some((_, r)) = p.pairs().iter().find(|(_, r)| !r.is_closed()) {
        let names: Vec<String> = r.free_vars().into_iter().collect();
        return Err(UnifyError::PreconditionViolated(format!(
            "right-hand side contains free variables: {}",
            names.join(", ")
        )));
    }
    let s = Search::new(p, *lim).run(p);
    debug_assert!(s.items.iter().all(|sol| sol.residual_flex_flex.is_empty()));
    finish(s.map(|sol| sol.substitution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::syntax::{format_term, parse_term};
    use crate::types::Type;
    use crate::unify::verify;

    fn sig() -> Signature {
        let mut s = Signature::with_consts(&[
            ("l", "e>e>t"),
            ("m", "e"),
            ("j", "e"),
            ("a", "e"),
            ("f", "e>e>e"),
            ("read", "e>e>t"),
            ("letters", "e>e>e"),
            ("s", "e"),
            ("p", "e"),
        ])
        .unwrap();
        let eet = Type::curried([Type::e(), Type::e()], Type::t());
        s.declare_meta("Gd", Some(eet)).unwrap();
        s.declare_meta("F", Some(Type::e())).unwrap();
        s.declare_meta("X", Some(Type::e())).unwrap();
        s.declare_meta("G", Some(Type::arrow(Type::e(), Type::e()))).unwrap();
        s.declare_meta("K", Some(Type::arrow(Type::arrow(Type::e(), Type::e()), Type::e()))).unwrap();
        s
    }

    fn problem(l: &str, r: &str) -> Problem {
        let s = sig();
        Problem::single(parse_term(l, &s).unwrap(), parse_term(r, &s).unwrap()).unwrap()
    }

    fn images(sols: &[Substitution], var: &str) -> Vec<String> {
        sols.iter().map(|s| format_term(s.get(var).unwrap())).collect()
    }

    #[test]
    fn ground_equation_has_two_unifiers() {
        let p = problem("Gd(m)", "lam x:e. l(x,m)");
        let sols = pre_unify(&p, &SearchLimits::default()).unwrap();
        assert_eq!(sols.truncated, None);
        let imgs: Vec<String> = sols.items.iter().map(|s| format_term(s.substitution.get("Gd").unwrap())).collect();
        assert_eq!(imgs.len(), 2);
        assert!(imgs.contains(&"lam y:e. lam x:e. l(x,y)".to_string()));
        assert!(imgs.contains(&"lam y:e. lam x:e. l(x,m)".to_string()));
    }

    #[test]
    fn first_order_variable() {
        let sols = pre_unify(&problem("F", "j"), &SearchLimits::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(format_term(sols.items[0].substitution.get("F").unwrap()), "j");
    }

    #[test]
    fn four_ways_to_abstract_a_repeated_argument() {
        let sols = ho_match(&problem("G(a)", "f(a,a)"), &SearchLimits::default()).unwrap();
        let mut imgs = images(&sols.items, "G");
        imgs.sort();
        assert_eq!(
            imgs,
            vec!["lam y:e. f(a,a)", "lam y:e. f(a,y)", "lam y:e. f(y,a)", "lam y:e. f(y,y)"]
        );
    }

    #[test]
    fn letters_ground_equation() {
        let p = problem("Gd(p)", "lam x:e. read(x, letters(s,p))");
        let sols = ho_match(&p, &SearchLimits::default()).unwrap();
        assert!(images(&sols.items, "Gd").contains(&"lam y:e. lam x:e. read(x,letters(s,y))".to_string()));
        assert!(sols.items.iter().all(|s| verify(s, &p)));
    }

    #[test]
    fn vacuous_abstraction_only() {
        let p = problem("Gd(m)", "lam x:e. l(x,j)");
        let sols = ho_match(&p, &SearchLimits::default()).unwrap();
        assert_eq!(images(&sols.items, "Gd"), vec!["lam y:e. lam x:e. l(x,j)"]);
    }

    #[test]
    fn trivial_match() {
        let sols = ho_match(&problem("X", "m"), &SearchLimits::default()).unwrap();
        assert_eq!(images(&sols.items, "X"), vec!["m"]);
    }

    #[test]
    fn match_rejects_open_right_side() {
        let err = ho_match(&problem("F", "G(j)"), &SearchLimits::default()).unwrap_err();
        assert!(matches!(err, UnifyError::PreconditionViolated(_)));
    }

    #[test]
    fn flex_flex_is_residual() {
        let sols = pre_unify(&problem("F", "G(j)"), &SearchLimits::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols.items[0].substitution.is_empty());
        assert_eq!(sols.items[0].residual_flex_flex.len(), 1);
    }

    #[test]
    fn identity_argument_hits_depth_limit() {
        // K(λx.x) = a has the infinite family λg.g^n(a)
        let p = problem("K(lam x:e. x)", "a");
        let sols = ho_match(&p, &SearchLimits::with_depth(3)).unwrap();
        assert_eq!(sols.truncated, Some(Limit::Depth));
        assert_eq!(
            images(&sols.items, "K"),
            vec!["lam y:e>e. a", "lam y:e>e. y(a)", "lam y:e>e. y(y(a))", "lam y:e>e. y(y(y(a)))"]
        );
    }

    #[test]
    fn unsolvable_is_exhaustive_failure() {
        let sols = ho_match(&problem("f(G(a), a)", "f(j,j)"), &SearchLimits::default()).unwrap();
        assert!(sols.is_empty());
        assert_eq!(sols.truncated, None);
    }

    #[test]
    fn node_limit() {
        let lim = SearchLimits { max_nodes: 3, ..SearchLimits::default() };
        let err = ho_match(&problem("Gd(m)", "lam x:e. l(x,m)"), &lim);
        assert!(matches!(err, Err(UnifyError::LimitExceeded(Limit::Nodes))));
    }

    #[test]
    fn deterministic() {
        let p = problem("G(a)", "f(a,a)");
        let a = ho_match(&p, &SearchLimits::default()).unwrap();
        let b = ho_match(&p, &SearchLimits::default()).unwrap();
        assert_eq!(a, b);
    }
}
