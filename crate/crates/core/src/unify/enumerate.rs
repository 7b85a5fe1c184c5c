//! Brute-force enumeration of closed long normal terms, used as a test
//! oracle for the matcher.

use crate::signature::Signature;
use crate::term::{Binder, Term};
use crate::types::Type;

struct Enumerator<'a> {
    consts: Vec<(&'a str, &'a Type)>,
}

impl Enumerator<'_> {
    /// All long normal terms of type `ty` in context `ctx` with size in
    /// `1..=budget`.
    fn terms(&self, ty: &Type, budget: usize, ctx: &mut Vec<Type>) -> Vec<Term> {
        let (doms, target) = ty.uncurry();
        let binders: Vec<Binder> = doms
            .iter()
            .map(|d| Binder { name: "u".to_string(), ty: (*d).clone() })
            .collect();
        ctx.extend(doms.iter().map(|d| (*d).clone()));
        let bodies = self.atomic(target, budget, ctx);
        ctx.truncate(ctx.len() - doms.len());
        bodies.into_iter().map(|b| Term::abstract_all(&binders, b)).collect()
    }

    fn atomic(&self, target: &Type, budget: usize, ctx: &mut Vec<Type>) -> Vec<Term> {
        if budget == 0 {
            return Vec::new();
        }
        let n = ctx.len();
        let mut heads: Vec<(Term, Type)> = (0..n).map(|k| (Term::Bound(n - 1 - k), ctx[k].clone())).collect();
        heads.extend(self.consts.iter().map(|(c, ty)| (Term::constant(c, (*ty).clone()), (*ty).clone())));
        let mut out = Vec::new();
        for (head, hty) in heads {
            let (args, htarget) = hty.uncurry();
            if htarget != target || budget < 1 + args.len() {
                continue;
            }
            let args: Vec<Type> = args.into_iter().cloned().collect();
            for combo in self.arg_lists(&args, budget - 1, ctx) {
                out.push(Term::apply(head.clone(), combo));
            }
        }
        out
    }

    fn arg_lists(&self, tys: &[Type], budget: usize, ctx: &mut Vec<Type>) -> Vec<Vec<Term>> {
        let Some((first, rest)) = tys.split_first() else {
            return vec![Vec::new()];
        };
        let mut out = Vec::new();
        for t in self.terms(first, budget - rest.len(), ctx) {
            let used = t.size();
            for mut tail in self.arg_lists(rest, budget - used, ctx) {
                tail.insert(0, t.clone());
                out.push(tail);
            }
        }
        out
    }
}

/// Every closed β-normal η-long term of type `ty` built from the
/// signature's constants with at most `k` constant and variable
/// occurrences, smallest first.
pub fn enumerate_ground_terms(ty: &Type, k: usize, sig: &Signature) -> Vec<Term> {
    let e = Enumerator { consts: sig.constants().collect() };
    let mut all = e.terms(ty, k, &mut Vec::new());
    all.sort_by_key(Term::size);
    let mut out: Vec<Term> = Vec::with_capacity(all.len());
    for t in all {
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}
