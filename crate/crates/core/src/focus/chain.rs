use std::fmt;

use crate::normalize::normalize;
use crate::term::Term;
use crate::types::{Type, TypeError};
use crate::typing::infer_concrete;
use crate::unify::{Limit, SearchLimits};

use super::{interpret_also, interpret_only, solve_fsv, FocusError, Fsv, GroundEquation, PorMode};

const SUBJECT: &str = "%z";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Only,
    Also,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::Only => "only",
            Operator::Also => "also",
        })
    }
}

/// One operator application: the ground equations set up for each
/// incoming VP semantics and the focus semantic values they yield.
#[derive(Clone, Debug)]
pub struct ChainStage {
    pub operator: Operator,
    pub focus: Term,
    pub equations: Vec<GroundEquation>,
    pub fsvs: Vec<Fsv>,
    /// Index into `equations` of the equation each FSV solves.
    pub sources: Vec<usize>,
    /// VP semantics passed on to the next stage.
    pub results: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct ChainAnalysis {
    pub stages: Vec<ChainStage>,
    /// Distinct sentence readings.
    pub readings: Vec<Term>,
    pub truncated: Option<Limit>,
}

/// Interprets a stack of focus operators over a VP. `chain` lists the
/// operators innermost first; stage `k` solves
/// `Gk(focus) = VPk` and forms `VPk+1 = λz. rule(z, VPk, fsv)`.
pub fn analyze_operator_chain(
    vp: &Term,
    chain: &[(Operator, Term)],
    np: &Term,
    lim: &SearchLimits,
    mode: PorMode,
) -> Result<ChainAnalysis, FocusError> {
    let np_ty = infer_concrete(np)?;
    let vp_ty = infer_concrete(vp)?;
    let expected = Type::arrow(np_ty.clone(), Type::t());
    if vp_ty != expected {
        return Err(TypeError::Mismatch { expected, found: vp_ty }.into());
    }
    let subject = Term::free(SUBJECT, np_ty.clone());
    let mut current = vec![normalize(vp)];
    let mut stages = Vec::new();
    let mut truncated = None;
    for (k, (op, focus)) in chain.iter().enumerate() {
        let mut stage = ChainStage {
            operator: *op,
            focus: focus.clone(),
            equations: Vec::new(),
            fsvs: Vec::new(),
            sources: Vec::new(),
            results: Vec::new(),
        };
        let mut last_err = None;
        for sem in &current {
            let geq = GroundEquation::build(sem, std::slice::from_ref(focus), &format!("G{}", k + 1))?;
            let fsvs = match solve_fsv(&geq, lim, mode) {
                Ok(s) => {
                    truncated = truncated.or(s.truncated);
                    s.items
                }
                Err(e @ (FocusError::NoSolution | FocusError::LimitExceeded(_))) => {
                    last_err = Some(e);
                    Vec::new()
                }
                Err(e) => return Err(e),
            };
            stage.equations.push(geq);
            for fsv in fsvs {
                let body = match op {
                    Operator::Only => interpret_only(&subject, sem, &fsv)?,
                    Operator::Also => interpret_also(&subject, sem, &fsv)?,
                };
                let next = normalize(&Term::lambda_over(SUBJECT, np_ty.clone(), &body));
                if !stage.results.contains(&next) {
                    stage.results.push(next);
                }
                stage.fsvs.push(fsv);
                stage.sources.push(stage.equations.len() - 1);
            }
        }
        if stage.results.is_empty() {
            return Err(last_err.unwrap_or(FocusError::NoSolution));
        }
        current = stage.results.clone();
        stages.push(stage);
    }
    let mut readings: Vec<Term> = Vec::new();
    for sem in &current {
        let r = normalize(&Term::app(sem.clone(), np.clone()));
        if !readings.contains(&r) {
            readings.push(r);
        }
    }
    Ok(ChainAnalysis { stages, readings, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::syntax::{format_term, parse_term};

    fn sig() -> Signature {
        Signature::with_consts(&[
            ("read", "e>e>t"),
            ("letters", "e>e>e"),
            ("s", "e"),
            ("p", "e"),
            ("jon", "e"),
            ("l", "e>e>t"),
            ("m", "e"),
        ])
        .unwrap()
    }

    fn term(src: &str) -> Term {
        normalize(&parse_term(src, &sig()).unwrap())
    }

    #[test]
    fn empty_chain_applies_the_vp() {
        let a = analyze_operator_chain(&term("lam x:e. l(x,m)"), &[], &term("jon"), &SearchLimits::default(), PorMode::Dsp)
            .unwrap();
        assert_eq!(a.readings, vec![term("l(jon,m)")]);
    }

    #[test]
    fn single_only() {
        let a = analyze_operator_chain(
            &term("lam x:e. l(x,m)"),
            &[(Operator::Only, term("m"))],
            &term("jon"),
            &SearchLimits::default(),
            PorMode::Dsp,
        )
        .unwrap();
        assert_eq!(a.readings.len(), 1);
        assert_eq!(
            a.readings[0],
            term("forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. l(x,y))), P(jon)), eq(P, lam x:e. l(x,m))))")
        );
    }

    #[test]
    fn only_inside_also() {
        // jon also only read the letters that s sent to p
        let vp = term("lam x:e. read(x, letters(s,p))");
        let chain = [(Operator::Only, term("p")), (Operator::Also, term("s"))];
        let a = analyze_operator_chain(&vp, &chain, &term("jon"), &SearchLimits::default(), PorMode::Dsp).unwrap();
        assert_eq!(a.stages.len(), 2);

        let g1 = &a.stages[0].fsvs;
        assert_eq!(g1.len(), 1);
        assert_eq!(format_term(&g1[0].gd), "lam y:e. lam x:e. read(x,letters(s,y))");

        let g2 = &a.stages[1].fsvs;
        assert_eq!(g2.len(), 1);
        let want = term(
            "lam u:e. lam z:e. forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. read(x,letters(u,y)))), P(z)), \
             eq(P, lam x:e. read(x, letters(u,p)))))",
        );
        assert_eq!(g2[0].gd, want);

        let g2 = "lam u:e. lam z:e. forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. read(x,letters(u,y)))), P(z)), \
                  eq(P, lam x:e. read(x, letters(u,p)))))";
        let vp2 = "lam z:e. forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. read(x,letters(s,y)))), P(z)), \
                   eq(P, lam x:e. read(x, letters(s,p)))))";
        let reading = term(&format!("exists(lam Q:e>t. and(and(in(Q, alt1({g2})), Q(jon)), not(eq(Q, {vp2}))))"));
        assert_eq!(a.readings, vec![reading]);
        assert_eq!(infer_concrete(&a.readings[0]).unwrap(), Type::t());
    }

    #[test]
    fn por_off_keeps_more_readings() {
        let chain = [(Operator::Only, term("m"))];
        let a = analyze_operator_chain(&term("lam x:e. l(x,m)"), &chain, &term("jon"), &SearchLimits::default(), PorMode::Off)
            .unwrap();
        assert_eq!(a.readings.len(), 2);
    }
}
