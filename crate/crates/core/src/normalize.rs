//! β-normal η-long forms.

use crate::term::{Binder, Term};
use crate::types::Type;

/// β-normal form. Only called on well-typed terms, which normalize.
pub fn beta_normal(t: &Term) -> Term {
    match t {
        Term::Const(_) | Term::Free(_) | Term::Bound(_) => t.clone(),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(beta_normal(body))),
        Term::App(..) => {
            let (head, args) = t.head_args();
            if let Term::Abs(_, body) = head {
                let reduced = body.instantiate(args[0]);
                beta_normal(&Term::apply(reduced, args[1..].iter().map(|a| (*a).clone())))
            } else {
                let head = beta_normal(head);
                Term::apply(head, args.into_iter().map(beta_normal))
            }
        }
    }
}

fn head_type(head: &Term, ctx: &[Type]) -> Option<Type> {
    match head {
        Term::Const(c) => Some(c.ty.clone()),
        Term::Free(v) => Some(v.ty.clone()),
        Term::Bound(i) => ctx.len().checked_sub(i + 1).map(|k| ctx[k].clone()),
        _ => None,
    }
}

/// Type left after applying a head of type `ty` to `n` arguments.
fn result_after(ty: &Type, n: usize) -> Option<&Type> {
    let mut ty = ty;
    for _ in 0..n {
        match ty {
            Type::Arrow(_, b) => ty = b,
            _ => return None,
        }
    }
    Some(ty)
}

fn expand(neutral: Term, ty: &Type, ctx: &mut Vec<Type>) -> Term {
    match ty {
        Type::Arrow(a, b) => {
            ctx.push((**a).clone());
            let x = long(&Term::Bound(0), ctx);
            let body = expand(Term::app(neutral.shift(1), x), b, ctx);
            ctx.pop();
            Term::Abs(Binder { name: "u".to_string(), ty: (**a).clone() }, Box::new(body))
        }
        _ => neutral,
    }
}

/// η-long form of a β-normal term.
fn long(t: &Term, ctx: &mut Vec<Type>) -> Term {
    match t {
        Term::Abs(b, body) => {
            ctx.push(b.ty.clone());
            let body = long(body, ctx);
            ctx.pop();
            Term::Abs(b.clone(), Box::new(body))
        }
        _ => {
            let (head, args) = t.head_args();
            let nargs = args.len();
            let rebuilt = Term::apply(head.clone(), args.into_iter().map(|a| long(a, ctx)));
            match head_type(head, ctx).as_ref().and_then(|ty| result_after(ty, nargs)) {
                Some(rest) => {
                    let rest = rest.clone();
                    expand(rebuilt, &rest, ctx)
                }
                None => rebuilt,
            }
        }
    }
}

/// β-normal η-long form. Idempotent and type-preserving on well-typed terms;
/// parts typed by type variables are left unexpanded.
pub fn normalize(t: &Term) -> Term {
    long(&beta_normal(t), &mut Vec::new())
}
