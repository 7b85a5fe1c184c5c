//! Terms of the simply-typed λ-calculus.
//!
//! Bound variables are de Bruijn indices; binders keep a display name that
//! plays no role in equality. Free variables are the unknowns (metas) that
//! the solvers instantiate.

use std::collections::BTreeSet;

use crate::types::{Type, TypeSubst};

#[derive(Clone, Debug)]
pub struct Const {
    pub name: String,
    pub ty: Type,
    /// Marks an occurrence directly associated with a focus.
    pub primary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub ty: Type,
}

#[derive(Clone, Debug)]
pub struct Binder {
    pub name: String,
    pub ty: Type,
}

#[derive(Clone, Debug)]
pub enum Term {
    Const(Const),
    Free(Var),
    /// de Bruijn index, 0 is the innermost binder.
    Bound(usize),
    Abs(Binder, Box<Term>),
    App(Box<Term>, Box<Term>),
}

/// One step of a path from the root of a term to a subterm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Body,
    Fun,
    Arg,
}

pub type Path = Vec<Step>;

impl PartialEq for Term {
    /// α-equivalence: binder names and primary marks are ignored.
    fn eq(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Const(a), Term::Const(b)) => a.name == b.name && a.ty == b.ty,
            (Term::Free(a), Term::Free(b)) => a == b,
            (Term::Bound(i), Term::Bound(j)) => i == j,
            (Term::Abs(x, a), Term::Abs(y, b)) => x.ty == y.ty && a == b,
            (Term::App(f, a), Term::App(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    a == b
}

impl Term {
    pub fn constant(name: &str, ty: Type) -> Term {
        Term::Const(Const { name: name.to_string(), ty, primary: false })
    }

    pub fn primary_constant(name: &str, ty: Type) -> Term {
        Term::Const(Const { name: name.to_string(), ty, primary: true })
    }

    pub fn free(name: &str, ty: Type) -> Term {
        Term::Free(Var { name: name.to_string(), ty })
    }

    pub fn abs(name: &str, ty: Type, body: Term) -> Term {
        Term::Abs(Binder { name: name.to_string(), ty }, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `f(a1)(a2)...`
    pub fn apply(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// Wraps `body` in abstractions, outermost first.
    pub fn abstract_all(binders: &[Binder], body: Term) -> Term {
        binders
            .iter()
            .rev()
            .fold(body, |acc, b| Term::Abs(b.clone(), Box::new(acc)))
    }

    /// Abstracts the free variable `name` (of type `ty`) out of `body`.
    pub fn lambda_over(name: &str, ty: Type, body: &Term) -> Term {
        fn go(t: &Term, name: &str, depth: usize) -> Term {
            match t {
                Term::Free(v) if v.name == name => Term::Bound(depth),
                Term::Const(_) | Term::Free(_) | Term::Bound(_) => t.clone(),
                Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(go(body, name, depth + 1))),
                Term::App(f, a) => Term::app(go(f, name, depth), go(a, name, depth)),
            }
        }
        Term::abs(name, ty, go(&body.shift(1), name, 0))
    }

    pub fn is_abs(&self) -> bool {
        matches!(self, Term::Abs(..))
    }

    /// `(λx1..xk. body)` → `([x1..xk], body)`
    pub fn strip_binders(&self) -> (Vec<Binder>, &Term) {
        let mut binders = Vec::new();
        let mut t = self;
        while let Term::Abs(b, body) = t {
            binders.push(b.clone());
            t = body;
        }
        (binders, t)
    }

    /// `h(a1)...(an)` → `(h, [a1..an])`
    pub fn head_args(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(a.as_ref());
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Adds `d` to every bound index that is at least `cutoff`.
    pub fn shift_from(&self, d: isize, cutoff: usize) -> Term {
        match self {
            Term::Bound(i) if *i >= cutoff => {
                let j = *i as isize + d;
                assert!(j >= 0, "negative de Bruijn index");
                Term::Bound(j as usize)
            }
            Term::Const(_) | Term::Free(_) | Term::Bound(_) => self.clone(),
            Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(body.shift_from(d, cutoff + 1))),
            Term::App(f, a) => Term::app(f.shift_from(d, cutoff), a.shift_from(d, cutoff)),
        }
    }

    pub fn shift(&self, d: isize) -> Term {
        self.shift_from(d, 0)
    }

    /// Replaces index `j` by `s` (which lives at the same depth as `self`).
    fn subst_index(&self, j: usize, s: &Term) -> Term {
        match self {
            Term::Bound(i) if *i == j => s.clone(),
            Term::Const(_) | Term::Free(_) | Term::Bound(_) => self.clone(),
            Term::Abs(b, body) => {
                Term::Abs(b.clone(), Box::new(body.subst_index(j + 1, &s.shift(1))))
            }
            Term::App(f, a) => Term::app(f.subst_index(j, s), a.subst_index(j, s)),
        }
    }

    /// Body of a β-redex `(λ. self) arg`, with the binder removed.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst_index(0, &arg.shift(1)).shift(-1)
    }

    /// Replaces free variables; images must not contain loose bound variables.
    pub fn replace_free(&self, f: &dyn Fn(&Var) -> Option<Term>) -> Term {
        match self {
            Term::Free(v) => match f(v) {
                Some(t) => {
                    debug_assert!(!t.has_loose_bound(), "substitution image is not closed");
                    t
                }
                None => self.clone(),
            },
            Term::Const(_) | Term::Bound(_) => self.clone(),
            Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(body.replace_free(f))),
            Term::App(g, a) => Term::app(g.replace_free(f), a.replace_free(f)),
        }
    }

    /// Applies `f` to every type annotation in the term.
    pub fn map_types(&self, f: &dyn Fn(&Type) -> Type) -> Term {
        match self {
            Term::Const(c) => Term::Const(Const { ty: f(&c.ty), ..c.clone() }),
            Term::Free(v) => Term::Free(Var { name: v.name.clone(), ty: f(&v.ty) }),
            Term::Bound(_) => self.clone(),
            Term::Abs(b, body) => Term::Abs(
                Binder { name: b.name.clone(), ty: f(&b.ty) },
                Box::new(body.map_types(f)),
            ),
            Term::App(g, a) => Term::app(g.map_types(f), a.map_types(f)),
        }
    }

    pub fn resolve_types(&self, s: &TypeSubst) -> Term {
        self.map_types(&|ty| s.apply(ty))
    }

    /// Calls `f` on every type annotation.
    pub fn each_type(&self, f: &mut dyn FnMut(&Type)) {
        match self {
            Term::Const(c) => f(&c.ty),
            Term::Free(v) => f(&v.ty),
            Term::Bound(_) => {}
            Term::Abs(b, body) => {
                f(&b.ty);
                body.each_type(f);
            }
            Term::App(g, a) => {
                g.each_type(f);
                a.each_type(f);
            }
        }
    }

    pub fn has_type_vars(&self) -> bool {
        let mut found = false;
        self.each_type(&mut |ty| found |= !ty.is_concrete());
        found
    }

    pub fn has_loose_bound(&self) -> bool {
        fn go(t: &Term, depth: usize) -> bool {
            match t {
                Term::Bound(i) => *i >= depth,
                Term::Const(_) | Term::Free(_) => false,
                Term::Abs(_, b) => go(b, depth + 1),
                Term::App(f, a) => go(f, depth) || go(a, depth),
            }
        }
        go(self, 0)
    }

    /// Free variables in order of first occurrence.
    pub fn free_var_list(&self) -> Vec<Var> {
        fn go(t: &Term, out: &mut Vec<Var>) {
            match t {
                Term::Free(v) => {
                    if !out.iter().any(|w| w.name == v.name) {
                        out.push(v.clone())
                    }
                }
                Term::Const(_) | Term::Bound(_) => {}
                Term::Abs(_, b) => go(b, out),
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.free_var_list().into_iter().map(|v| v.name).collect()
    }

    /// True when the term has no free variables (metas).
    pub fn is_closed(&self) -> bool {
        match self {
            Term::Free(_) => false,
            Term::Const(_) | Term::Bound(_) => true,
            Term::Abs(_, b) => b.is_closed(),
            Term::App(f, a) => f.is_closed() && a.is_closed(),
        }
    }

    /// Names of constants and free variables occurring in the term.
    pub fn symbol_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(c) => {
                out.insert(c.name.clone());
            }
            Term::Free(v) => {
                out.insert(v.name.clone());
            }
            Term::Bound(_) => {}
            Term::Abs(_, b) => b.symbol_names(out),
            Term::App(f, a) => {
                f.symbol_names(out);
                a.symbol_names(out);
            }
        }
    }

    /// Number of constant and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Const(_) | Term::Free(_) | Term::Bound(_) => 1,
            Term::Abs(_, b) => b.size(),
            Term::App(f, a) => f.size() + a.size(),
        }
    }

    pub fn has_primary(&self) -> bool {
        match self {
            Term::Const(c) => c.primary,
            Term::Free(_) | Term::Bound(_) => false,
            Term::Abs(_, b) => b.has_primary(),
            Term::App(f, a) => f.has_primary() || a.has_primary(),
        }
    }

    pub fn strip_primary(&self) -> Term {
        match self {
            Term::Const(c) => Term::Const(Const { primary: false, ..c.clone() }),
            Term::Free(_) | Term::Bound(_) => self.clone(),
            Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(body.strip_primary())),
            Term::App(f, a) => Term::app(f.strip_primary(), a.strip_primary()),
        }
    }

    pub fn subterm_at(&self, path: &[Step]) -> Option<&Term> {
        let mut t = self;
        for step in path {
            t = match (step, t) {
                (Step::Body, Term::Abs(_, b)) => b,
                (Step::Fun, Term::App(f, _)) => f,
                (Step::Arg, Term::App(_, a)) => a,
                _ => return None,
            };
        }
        Some(t)
    }

    /// Replaces the subterm at `path`; `new` must already live at that depth.
    pub fn replace_at(&self, path: &[Step], new: &Term) -> Option<Term> {
        let Some((step, rest)) = path.split_first() else {
            return Some(new.clone());
        };
        match (step, self) {
            (Step::Body, Term::Abs(b, body)) => {
                Some(Term::Abs(b.clone(), Box::new(body.replace_at(rest, new)?)))
            }
            (Step::Fun, Term::App(f, a)) => Some(Term::App(Box::new(f.replace_at(rest, new)?), a.clone())),
            (Step::Arg, Term::App(f, a)) => Some(Term::App(f.clone(), Box::new(a.replace_at(rest, new)?))),
            _ => None,
        }
    }

    /// Paths of all subterms satisfying `pred`, in pre-order.
    pub fn positions(&self, pred: &dyn Fn(&Term) -> bool) -> Vec<Path> {
        fn go(t: &Term, pred: &dyn Fn(&Term) -> bool, path: &mut Path, out: &mut Vec<Path>) {
            if pred(t) {
                out.push(path.clone());
            }
            match t {
                Term::Abs(_, b) => {
                    path.push(Step::Body);
                    go(b, pred, path, out);
                    path.pop();
                }
                Term::App(f, a) => {
                    path.push(Step::Fun);
                    go(f, pred, path, out);
                    path.pop();
                    path.push(Step::Arg);
                    go(a, pred, path, out);
                    path.pop();
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, pred, &mut Vec::new(), &mut out);
        out
    }
}
