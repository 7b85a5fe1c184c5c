use crate::term::Term;

use super::Problem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplified {
    Failure,
    Simplified { flex_rigid: Vec<(Term, Term)>, flex_flex: Vec<(Term, Term)> },
}

fn is_flex(head: &Term) -> bool {
    matches!(head, Term::Free(_))
}

fn same_rigid_head(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Const(x), Term::Const(y)) => x.name == y.name && x.ty == y.ty,
        (Term::Bound(i), Term::Bound(j)) => i == j,
        _ => false,
    }
}

/// SIMPL on normalized pairs. Rigid-rigid pairs are decomposed left to
/// right; flex pairs come out with the flex side on the left, in the order
/// they are reached.
pub(crate) fn simplify_pairs(pairs: Vec<(Term, Term)>) -> Simplified {
    let mut flex_rigid = Vec::new();
    let mut flex_flex = Vec::new();
    let mut stack: Vec<(Term, Term)> = pairs.into_iter().rev().collect();
    while let Some((s, t)) = stack.pop() {
        if s == t {
            continue;
        }
        let (binders, sbody) = s.strip_binders();
        let (tbinders, tbody) = t.strip_binders();
        if binders.len() != tbinders.len() {
            return Simplified::Failure;
        }
        let (sh, sargs) = sbody.head_args();
        let (th, targs) = tbody.head_args();
        match (is_flex(sh), is_flex(th)) {
            (false, false) => {
                if !same_rigid_head(sh, th) || sargs.len() != targs.len() {
                    return Simplified::Failure;
                }
                for (a, b) in sargs.into_iter().zip(targs).rev() {
                    stack.push((
                        Term::abstract_all(&binders, a.clone()),
                        Term::abstract_all(&binders, b.clone()),
                    ));
                }
            }
            (true, false) => flex_rigid.push((s, t)),
            (false, true) => flex_rigid.push((t, s)),
            (true, true) => flex_flex.push((s, t)),
        }
    }
    Simplified::Simplified { flex_rigid, flex_flex }
}

pub fn simplify(p: &Problem) -> Simplified {
    simplify_pairs(p.pairs().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::syntax::parse_term;
    use crate::types::Type;

    fn problem(l: &str, r: &str) -> Problem {
        let mut s = Signature::with_consts(&[("l", "e>e>t"), ("m", "e"), ("j", "e")]).unwrap();
        s.declare_meta("Gd", Some(Type::curried([Type::e(), Type::e()], Type::t()))).unwrap();
        s.declare_meta("F", Some(Type::e())).unwrap();
        s.declare_meta("G", Some(Type::e())).unwrap();
        Problem::single(parse_term(l, &s).unwrap(), parse_term(r, &s).unwrap()).unwrap()
    }

    #[test]
    fn identical_sides() {
        let p = problem("lam x:e. l(x,m)", "lam x:e. l(x,m)");
        assert_eq!(simplify(&p), Simplified::Simplified { flex_rigid: vec![], flex_flex: vec![] });
    }

    #[test]
    fn rigid_clash() {
        assert_eq!(simplify(&problem("lam x:e. l(x,m)", "lam x:e. l(x,j)")), Simplified::Failure);
    }

    #[test]
    fn ground_equation_is_flex_rigid() {
        let p = problem("Gd(m)", "lam x:e. l(x,m)");
        let Simplified::Simplified { flex_rigid, flex_flex } = simplify(&p) else { panic!() };
        assert_eq!(flex_rigid, p.pairs().to_vec());
        assert!(flex_flex.is_empty());
    }

    #[test]
    fn orients_and_classifies() {
        let p = problem("l(m, F)", "l(G, F)");
        let Simplified::Simplified { flex_rigid, flex_flex } = simplify(&p) else { panic!() };
        assert_eq!(flex_rigid.len(), 1);
        assert!(matches!(flex_rigid[0].0, Term::Free(_)));
        assert!(flex_flex.is_empty());
        let p = problem("l(F, m)", "l(G, m)");
        let Simplified::Simplified { flex_rigid, flex_flex } = simplify(&p) else { panic!() };
        assert!(flex_rigid.is_empty());
        assert_eq!(flex_flex.len(), 1);
    }
}
