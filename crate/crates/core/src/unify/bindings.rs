use std::collections::BTreeSet;

use crate::normalize::normalize;
use crate::subst::Substitution;
use crate::term::{Binder, Term, Var};
use crate::types::Type;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BindingKind {
    Imitation,
    /// Projection onto the argument with this (0-based) index.
    Projection(usize),
}

/// A partial binding `flex ↦ λw. h(H1(w), ..., Hr(w))` produced by MATCH.
#[derive(Clone, Debug)]
pub struct Binding {
    pub var: String,
    pub term: Term,
    pub kind: BindingKind,
    /// The head takes arguments of its own, so its new unknowns are
    /// applied under it.
    pub higher_order: bool,
}

impl Binding {
    pub fn substitution(&self) -> Substitution {
        Substitution::singleton(&self.var, self.term.clone())
    }
}

/// Supply of fresh meta names `_H1`, `_H2`, ... avoiding a fixed set.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    next: usize,
    avoid: BTreeSet<String>,
}

impl FreshNames {
    pub fn avoiding(avoid: BTreeSet<String>) -> Self {
        FreshNames { next: 0, avoid }
    }

    pub fn reset(&mut self) {
        self.next = 0;
    }

    pub fn fresh(&mut self) -> String {
        loop {
            self.next += 1;
            let name = format!("_H{}", self.next);
            if !self.avoid.contains(&name) {
                return name;
            }
        }
    }
}

/// Builds `λw1..wm. head(H1(w), ..., Hr(w))` for a flex variable of type
/// `τ1 > ... > τm > β`; `head` is already indexed under the m binders.
fn partial_binding(
    flex: &Var,
    head: Term,
    head_ty: &Type,
    fresh: &mut FreshNames,
) -> Term {
    let (doms, _) = flex.ty.uncurry();
    let m = doms.len();
    let (head_args, _) = head_ty.uncurry();
    let ws: Vec<Term> = (0..m).map(|k| Term::Bound(m - 1 - k)).collect();
    let args: Vec<Term> = head_args
        .iter()
        .map(|rho| {
            let hty = Type::curried(doms.iter().map(|d| (*d).clone()), (*rho).clone());
            Term::apply(Term::free(&fresh.fresh(), hty), ws.clone())
        })
        .collect();
    let binders: Vec<Binder> = doms
        .iter()
        .map(|d| Binder { name: "w".to_string(), ty: (*d).clone() })
        .collect();
    normalize(&Term::abstract_all(&binders, Term::apply(head, args)))
}

/// MATCH: the imitation binding (when the rigid head is a constant) followed
/// by one projection per argument whose result type agrees with the flex
/// variable's.
pub fn match_bindings(flex: &Var, rigid_head: &Term, fresh: &mut FreshNames) -> Vec<Binding> {
    let mut out = Vec::new();
    let (doms, target) = flex.ty.uncurry();
    let m = doms.len();
    if let Term::Const(c) = rigid_head {
        if c.ty.target() == target {
            let head = Term::constant(&c.name, c.ty.clone());
            out.push(Binding {
                var: flex.name.clone(),
                term: partial_binding(flex, head, &c.ty, fresh),
                kind: BindingKind::Imitation,
                higher_order: c.ty.arity() > 0,
            });
        }
    }
    for (i, dom) in doms.iter().enumerate() {
        if dom.target() != target {
            continue;
        }
        let head = Term::Bound(m - 1 - i);
        out.push(Binding {
            var: flex.name.clone(),
            term: partial_binding(flex, head, dom, fresh),
            kind: BindingKind::Projection(i),
            higher_order: dom.arity() > 0,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::syntax::{format_term, parse_term};

    fn var(name: &str, ty: &str) -> Var {
        let s = Signature::new();
        Var { name: name.to_string(), ty: crate::syntax::parse_type(ty, &s).unwrap() }
    }

    #[test]
    fn imitation_of_binary_constant() {
        let l = Term::constant("l", Type::curried([Type::e(), Type::e()], Type::t()));
        let bs = match_bindings(&var("F", "e>t"), &l, &mut FreshNames::default());
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].kind, BindingKind::Imitation);
        assert_eq!(format_term(&bs[0].term), "lam y:e. l(_H1(y),_H2(y))");
        // an instance of the binding reproduces the intended value
        let mut sigma = bs[0].substitution();
        let s = Signature::with_consts(&[("l", "e>e>t"), ("m", "e")]).unwrap();
        sigma.bind("_H1", &parse_term("lam x:e. x", &s).unwrap());
        sigma.bind("_H2", &parse_term("lam x:e. m", &s).unwrap());
        assert_eq!(sigma.get("F").unwrap(), &parse_term("lam x:e. l(x,m)", &s).unwrap());
    }

    #[test]
    fn individual_target_has_two_shapes() {
        let j = Term::constant("j", Type::e());
        let bs = match_bindings(&var("F", "e>e"), &j, &mut FreshNames::default());
        let shapes: Vec<String> = bs.iter().map(|b| format_term(&b.term)).collect();
        assert_eq!(shapes, vec!["lam y:e. j", "lam y:e. y"]);
        assert_eq!(bs[1].kind, BindingKind::Projection(0));
    }

    #[test]
    fn no_projection_without_arguments() {
        let l = Term::constant("l", Type::curried([Type::e(), Type::e()], Type::t()));
        let bs = match_bindings(&var("F", "t"), &l, &mut FreshNames::default());
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].kind, BindingKind::Imitation);
    }

    #[test]
    fn bound_rigid_head_only_projects() {
        let bs = match_bindings(&var("F", "e>(e>t)>t"), &Term::Bound(0), &mut FreshNames::default());
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].kind, BindingKind::Projection(1));
        assert!(bs[0].higher_order);
        assert_eq!(format_term(&bs[0].term), "lam y:e. lam x:e>t. x(_H1(y,lam z:e. x(z)))");
    }
}
