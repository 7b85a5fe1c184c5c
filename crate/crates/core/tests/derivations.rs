//! The worked derivations, end to end through the public API.

use hou_focus::focus::{
    analyze_operator_chain, build_ground_equation, fsv_member, interpret_also, interpret_only, solve_fsv, Fsv,
    Operator, PorMode,
};
use hou_focus::soe::{build_soe_equations, resolve_soe, schedule_solve, SoeError, SoeProblem};
use hou_focus::unify::{verify, Problem, SearchLimits};
use hou_focus::{normalize, parse_term, Signature, Term, Type};

fn sig() -> Signature {
    let mut s = Signature::with_consts(&[
        ("l", "e>e>t"),
        ("j", "e"),
        ("m", "e"),
        ("p", "e"),
        ("s", "e"),
        ("read", "e>e>t"),
        ("letters", "e>e>e"),
    ])
    .unwrap();
    s.declare_meta("Gd", None).unwrap();
    s
}

fn term(src: &str) -> Term {
    normalize(&parse_term(src, &sig()).unwrap())
}

fn lim() -> SearchLimits {
    SearchLimits::default()
}

const ONLY_MARY: &str =
    "forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. l(x,y))), P(j)), eq(P, lam x:e. l(x,m))))";

#[test]
fn likes_mary_fsv() {
    let s = sig();
    let geq = build_ground_equation(&term("lam x:e. l(x,m)"), &[term("m")], &s).unwrap();
    let dsp = solve_fsv(&geq, &lim(), PorMode::Dsp).unwrap();
    assert_eq!(dsp.items.len(), 1);
    assert_eq!(dsp.items[0].gd, term("lam y:e. lam x:e. l(x,y)"));
    let off = solve_fsv(&geq, &lim(), PorMode::Off).unwrap();
    assert_eq!(off.items.len(), 2);
    assert!(off.items.iter().any(|f| f.gd == term("lam y:e. lam x:e. l(x,m)")));
}

#[test]
fn likes_mary_only_reading() {
    let fsv = Fsv::new(term("lam y:e. lam x:e. l(x,y)"), 1).unwrap();
    let reading = interpret_only(&term("j"), &term("lam x:e. l(x,m)"), &fsv).unwrap();
    assert_eq!(reading, term(ONLY_MARY));
    let also = interpret_also(&term("j"), &term("lam x:e. l(x,m)"), &fsv).unwrap();
    assert_eq!(hou_focus::infer_type(&also).unwrap(), Type::t());
    assert!(also.is_closed());
}

#[test]
fn letters_fsv_and_membership() {
    let s = sig();
    let vp = term("lam x:e. read(x, letters(s,p))");
    let geq = build_ground_equation(&vp, &[term("p")], &s).unwrap();
    let fsvs = solve_fsv(&geq, &lim(), PorMode::Dsp).unwrap().items;
    assert_eq!(fsvs.len(), 1);
    assert_eq!(fsvs[0].gd, term("lam y:e. lam x:e. read(x, letters(s,y))"));
    assert_eq!(fsv_member(&fsvs[0], &vp, &lim()).unwrap(), Some(vec![term("p")]));

    let only = interpret_only(&term("j"), &vp, &fsvs[0]).unwrap();
    let want = term(
        "forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. read(x,letters(s,y)))), P(j)), \
         eq(P, lam x:e. read(x,letters(s,p)))))",
    );
    assert_eq!(only, want);
}

#[test]
fn also_over_only() {
    let vp = term("lam x:e. read(x, letters(s,p))");
    let chain = [(Operator::Only, term("p")), (Operator::Also, term("s"))];
    let a = analyze_operator_chain(&vp, &chain, &term("j"), &lim(), PorMode::Dsp).unwrap();
    let g2 = "lam u:e. lam z:e. forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. read(x,letters(u,y)))), \
              P(z)), eq(P, lam x:e. read(x,letters(u,p)))))";
    assert!(a.stages[1].fsvs.iter().any(|f| f.gd == term(g2)));
    let only_vp = "lam z:e. forall(lam P:e>t. imp(and(in(P, alt1(lam y:e. lam x:e. read(x,letters(s,y)))), P(z)), \
                   eq(P, lam x:e. read(x,letters(s,p)))))";
    let want = term(&format!("exists(lam P:e>t. and(and(in(P, alt1({g2})), P(j)), not(eq(P, {only_vp}))))"));
    assert_eq!(a.readings, vec![want]);

    // every stage value solves its own ground equation
    for stage in &a.stages {
        for (fsv, &k) in stage.fsvs.iter().zip(&stage.sources) {
            let geq = &stage.equations[k];
            let sigma = hou_focus::Substitution::singleton(&geq.gd_var.name, fsv.gd.clone());
            assert!(verify(&sigma, &geq.problem().unwrap()));
        }
    }
}

fn correction(target_object: &str) -> SoeProblem {
    SoeProblem {
        source_sem: term(ONLY_MARY),
        parallel_pairs: vec![(term("j"), term("p"))],
        template: parse_term(
            &format!("forall(lam P:e>t. imp(and(in(P, alt1(Gd)), P(p)), eq(P, lam x:e. l(x,{target_object}))))"),
            &sig(),
        )
        .unwrap(),
    }
}

#[test]
fn correction_recovers_fsv_and_focus() {
    let results = resolve_soe(&correction("m"), &lim(), PorMode::Dsp).unwrap();
    assert_eq!(results.len(), 1);
    let r = &results[0];
    assert_eq!(r.gd, Some(term("lam y:e. lam x:e. l(x,y)")));
    assert_eq!(r.foci, vec![term("m")]);
    assert_eq!(normalize(&Term::app(r.an.clone(), term("j"))), term(ONLY_MARY));
    let fsv = Fsv::new(term("lam y:e. lam x:e. l(x,y)"), 1).unwrap();
    assert_eq!(r.target_sem, interpret_only(&term("p"), &term("lam x:e. l(x,m)"), &fsv).unwrap());

    let mut sigma = hou_focus::Substitution::new();
    let sys = build_soe_equations(&correction("m")).unwrap();
    sigma.bind(&sys.an_var.name, &r.an);
    sigma.bind(&sys.gd_var.as_ref().unwrap().name, r.gd.as_ref().unwrap());
    sigma.bind(&sys.focus_vars[0].name, &r.foci[0]);
    assert!(verify(&sigma, &Problem::new(r.equations.clone()).unwrap()));
    assert!(r.steps.iter().all(|(a, b)| !a.has_type_vars() && !b.has_type_vars()));
}

#[test]
fn correction_with_new_object_is_rejected() {
    for mode in [PorMode::Off, PorMode::Dsp, PorMode::Strict] {
        let sys = build_soe_equations(&correction("s")).unwrap();
        assert_eq!(schedule_solve(&sys, &lim(), mode).unwrap_err(), SoeError::NoSolution);
    }
}
