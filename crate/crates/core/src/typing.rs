//! Type inference. Terms carry their annotations, so inference is checking
//! plus first-order unification for the parts still typed by variables.

use crate::term::Term;
use crate::types::{Type, TypeError, TypeSubst};

/// Infers the type of `term` under the binder context `ctx` (innermost
/// last), extending `subst` with whatever type-variable bindings are needed.
pub fn infer_in(term: &Term, ctx: &mut Vec<Type>, subst: &mut TypeSubst) -> Result<Type, TypeError> {
    match term {
        Term::Const(c) => Ok(subst.apply(&c.ty)),
        Term::Free(v) => Ok(subst.apply(&v.ty)),
        Term::Bound(i) => ctx
            .len()
            .checked_sub(i + 1)
            .map(|k| subst.apply(&ctx[k]))
            .ok_or(TypeError::LooseBound(*i)),
        Term::Abs(b, body) => {
            ctx.push(b.ty.clone());
            let res = infer_in(body, ctx, subst);
            ctx.pop();
            Ok(Type::arrow(subst.apply(&b.ty), res?))
        }
        Term::App(f, a) => {
            let fty = infer_in(f, ctx, subst)?;
            let aty = infer_in(a, ctx, subst)?;
            match fty {
                Type::Arrow(dom, cod) => {
                    subst.unify(&dom, &aty).map_err(|_| TypeError::Mismatch {
                        expected: subst.apply(&dom),
                        found: subst.apply(&aty),
                    })?;
                    Ok(subst.apply(&cod))
                }
                Type::Var(_) => {
                    let cod = Type::fresh_var();
                    subst.unify(&fty, &Type::arrow(aty, cod.clone()))?;
                    Ok(subst.apply(&cod))
                }
                other => Err(TypeError::NotAFunction(other)),
            }
        }
    }
}

/// Infers the type of a closed-over-binders term. The result may contain
/// type variables when free variables have unknown types.
pub fn infer_type(term: &Term) -> Result<Type, TypeError> {
    let mut subst = TypeSubst::new();
    infer_type_with(term, &mut subst)
}

pub fn infer_type_with(term: &Term, subst: &mut TypeSubst) -> Result<Type, TypeError> {
    let ty = infer_in(term, &mut Vec::new(), subst)?;
    Ok(subst.apply(&ty))
}

/// Infers a type that must be fully known.
pub fn infer_concrete(term: &Term) -> Result<Type, TypeError> {
    let ty = infer_type(term)?;
    if ty.is_concrete() && !term.has_type_vars() {
        Ok(ty)
    } else {
        Err(TypeError::NotConcrete(ty))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::syntax::parse_term;

    fn sig() -> Signature {
        Signature::with_consts(&[("l", "e>e>t"), ("m", "e"), ("j", "e")]).unwrap()
    }

    #[test]
    fn infers_vp_and_ground_types() {
        let s = sig();
        let vp = parse_term("lam x:e. l(x,m)", &s).unwrap();
        assert_eq!(infer_type(&vp).unwrap().to_string(), "e>t");
        let gd = parse_term("lam y:e. lam x:e. l(x,y)", &s).unwrap();
        assert_eq!(infer_type(&gd).unwrap().to_string(), "e>e>t");
    }

    #[test]
    fn rejects_application_of_individual() {
        let bad = Term::app(Term::constant("m", Type::e()), Term::constant("j", Type::e()));
        assert!(matches!(infer_type(&bad), Err(TypeError::NotAFunction(_))));
    }

    #[test]
    fn rejects_argument_clash() {
        let l = Term::constant("l", Type::curried([Type::e(), Type::e()], Type::t()));
        let bad = Term::app(l, Term::constant("p", Type::t()));
        assert!(matches!(infer_type(&bad), Err(TypeError::Mismatch { .. })));
    }

    #[test]
    fn partial_types_for_unknown_metas() {
        let g = Term::free("G", Type::fresh_var());
        let ty = infer_type(&Term::app(g, Term::constant("m", Type::e()))).unwrap();
        assert!(!ty.is_concrete());
    }
}
