#![allow(dead_code)]

use hou_focus::signature::Signature;
use hou_focus::{parse_type, Term, Type};
use rand::seq::SliceRandom;
use rand::Rng;

pub const CONSTS: &[(&str, &str)] = &[
    ("a", "e"),
    ("b", "e"),
    ("c", "t"),
    ("f", "e>e>e"),
    ("g", "e>e"),
    ("p", "e>t"),
    ("r", "e>e>t"),
    ("h", "(e>e)>e"),
    ("q", "(e>t)>t"),
];

pub const METAS: &[(&str, &str)] = &[("X", "e"), ("F", "e>e"), ("Q", "(e>t)>t")];

pub const TYPES: &[&str] = &["e", "t", "e>e", "e>t", "(e>e)>e", "e>e>t", "(e>t)>t"];

pub fn signature() -> Signature {
    let mut sig = Signature::with_consts(CONSTS).unwrap();
    for (name, ty) in METAS {
        let ty = parse_type(ty, &sig).unwrap();
        sig.declare_meta(name, Some(ty)).unwrap();
    }
    sig
}

pub fn ty(src: &str) -> Type {
    parse_type(src, &Signature::new()).unwrap()
}

pub fn random_type(rng: &mut impl Rng) -> Type {
    ty(TYPES.choose(rng).unwrap())
}

/// Number of arguments `hty` must be applied to in order to reach `want`.
fn args_to_reach<'a>(mut hty: &'a Type, want: &Type) -> Option<Vec<&'a Type>> {
    let mut args = Vec::new();
    loop {
        if hty == want {
            return Some(args);
        }
        match hty {
            Type::Arrow(a, b) => {
                args.push(a.as_ref());
                hty = b;
            }
            _ => return None,
        }
    }
}

/// Random well-typed terms, not necessarily normal: they may contain
/// β-redexes and η-short subterms.
pub struct TermGen {
    heads: Vec<(Term, Type)>,
    /// Allow free variables.
    pub open: bool,
    pub redex_rate: f64,
}

impl TermGen {
    pub fn new(sig: &Signature) -> TermGen {
        let mut heads: Vec<(Term, Type)> =
            sig.constants().map(|(n, t)| (Term::constant(n, t.clone()), t.clone())).collect();
        for (name, _) in METAS {
            if let Some(t) = sig.meta_type(name) {
                heads.push((Term::free(name, t.clone()), t.clone()));
            }
        }
        TermGen { heads, open: true, redex_rate: 0.15 }
    }

    pub fn closed(sig: &Signature) -> TermGen {
        TermGen { open: false, redex_rate: 0.0, ..TermGen::new(sig) }
    }

    pub fn term(&self, rng: &mut impl Rng, ty: &Type, depth: usize) -> Term {
        self.term_in(rng, ty, depth, &mut Vec::new())
    }

    fn term_in(&self, rng: &mut impl Rng, ty: &Type, depth: usize, ctx: &mut Vec<Type>) -> Term {
        if let Type::Arrow(a, b) = ty {
            if depth == 0 || rng.gen_bool(0.6) {
                ctx.push((**a).clone());
                let body = self.term_in(rng, b, depth, ctx);
                ctx.pop();
                return Term::abs("x", (**a).clone(), body);
            }
        }
        if depth > 0 && rng.gen_bool(self.redex_rate) {
            let sigma = random_type(rng);
            ctx.push(sigma.clone());
            let body = self.term_in(rng, ty, depth - 1, ctx);
            ctx.pop();
            let arg = self.term_in(rng, &sigma, depth - 1, ctx);
            return Term::app(Term::abs("w", sigma, body), arg);
        }
        let n = ctx.len();
        let mut options: Vec<(Term, Vec<Type>)> = Vec::new();
        let bound = ctx.iter().enumerate().map(|(k, t)| (Term::Bound(n - 1 - k), t.clone()));
        let heads = self.heads.iter().filter(|(h, _)| self.open || !matches!(h, Term::Free(_))).cloned();
        for (head, hty) in bound.chain(heads) {
            if let Some(args) = args_to_reach(&hty, ty) {
                if depth > 0 || args.is_empty() {
                    options.push((head, args.into_iter().cloned().collect()));
                }
            }
        }
        if options.is_empty() {
            // depth exhausted: fall back to the smallest application available
            for (head, hty) in self.heads.iter().filter(|(h, _)| !matches!(h, Term::Free(_))) {
                if let Some(args) = args_to_reach(hty, ty) {
                    options.push((head.clone(), args.into_iter().cloned().collect()));
                }
            }
            options.sort_by_key(|(_, a)| a.len());
            options.truncate(1);
        }
        let (head, args) = options.choose(rng).expect("every base type has a constant").clone();
        let d = depth.saturating_sub(1);
        let args: Vec<Term> = args.iter().map(|a| self.term_in(rng, a, d, ctx)).collect();
        Term::apply(head, args)
    }
}

fn head_type(head: &Term, ctx: &[Type]) -> Option<Type> {
    match head {
        Term::Const(c) => Some(c.ty.clone()),
        Term::Free(v) => Some(v.ty.clone()),
        Term::Bound(i) => ctx.get(ctx.len().checked_sub(i + 1)?).cloned(),
        _ => None,
    }
}

/// Checks that `t : ty` is β-normal and η-long.
pub fn is_long_normal(t: &Term, ty: &Type) -> bool {
    fn go(t: &Term, ty: &Type, ctx: &mut Vec<Type>) -> bool {
        if let Type::Arrow(a, b) = ty {
            let Term::Abs(binder, body) = t else { return false };
            if binder.ty != **a {
                return false;
            }
            ctx.push((**a).clone());
            let ok = go(body, b, ctx);
            ctx.pop();
            return ok;
        }
        let (head, args) = t.head_args();
        let Some(hty) = head_type(head, ctx) else { return false };
        let (doms, target) = hty.uncurry();
        if doms.len() != args.len() || target != ty {
            return false;
        }
        let doms: Vec<Type> = doms.into_iter().cloned().collect();
        args.iter().zip(&doms).all(|(a, d)| go(a, d, ctx))
    }
    go(t, ty, &mut Vec::new())
}
