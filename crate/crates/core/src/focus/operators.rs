use crate::logic;
use crate::normalize::normalize;
use crate::term::Term;
use crate::types::{Type, TypeError};
use crate::typing::infer_concrete;

use super::{FocusError, Fsv};

const PROP: &str = "%P";

/// Checks `vp : τ` with `τ = np_ty > t` and that `τ` is the element type of
/// the focus semantic value. Returns `τ`.
fn check(np: &Term, vp: &Term, fsv: &Fsv) -> Result<Type, FocusError> {
    let np_ty = infer_concrete(np)?;
    let vp_ty = infer_concrete(vp)?;
    let expected = Type::arrow(np_ty, Type::t());
    if vp_ty != expected {
        return Err(TypeError::Mismatch { expected, found: vp_ty }.into());
    }
    let elem = fsv.element_type();
    if elem != vp_ty {
        return Err(TypeError::Mismatch { expected: vp_ty, found: elem }.into());
    }
    Ok(vp_ty)
}

fn alternatives(fsv: &Fsv, ty: &Type) -> Term {
    Term::app(logic::alt(&fsv.argument_types, ty), fsv.gd.clone())
}

/// `∀P. (P ∈ alt(gd) ∧ P(np)) ⇒ P = vp`
pub fn interpret_only(np: &Term, vp: &Term, fsv: &Fsv) -> Result<Term, FocusError> {
    let ty = check(np, vp, fsv)?;
    let p = Term::free(PROP, ty.clone());
    let body = Term::apply(
        logic::imp(),
        [
            Term::apply(
                logic::and(),
                [
                    Term::apply(logic::member(&ty), [p.clone(), alternatives(fsv, &ty)]),
                    Term::app(p.clone(), np.clone()),
                ],
            ),
            Term::apply(logic::eq(&ty), [p, vp.clone()]),
        ],
    );
    Ok(normalize(&Term::app(logic::forall(&ty), Term::lambda_over(PROP, ty, &body))))
}

/// `∃P. (P ∈ alt(gd) ∧ P(np)) ∧ ¬(P = vp)`
pub fn interpret_also(np: &Term, vp: &Term, fsv: &Fsv) -> Result<Term, FocusError> {
    let ty = check(np, vp, fsv)?;
    let p = Term::free(PROP, ty.clone());
    let body = Term::apply(
        logic::and(),
        [
            Term::apply(
                logic::and(),
                [
                    Term::apply(logic::member(&ty), [p.clone(), alternatives(fsv, &ty)]),
                    Term::app(p.clone(), np.clone()),
                ],
            ),
            Term::app(logic::not(), Term::apply(logic::eq(&ty), [p, vp.clone()])),
        ],
    );
    Ok(normalize(&Term::app(logic::exists(&ty), Term::lambda_over(PROP, ty, &body))))
}
