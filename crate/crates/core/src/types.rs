//! Simple types: base types, arrows, sets and type variables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

static NEXT_TYVAR: AtomicU32 = AtomicU32::new(0);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Base(String),
    Arrow(Box<Type>, Box<Type>),
    Set(Box<Type>),
    /// Unknown type, only allowed while an equation is delayed.
    Var(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { expected: Type, found: Type },
    #[error("cannot apply a term of type {0}")]
    NotAFunction(Type),
    #[error("type variable ?{0} occurs in {1}")]
    Occurs(u32, Type),
    #[error("type {0} is not fully known")]
    NotConcrete(Type),
    #[error("unknown base type `{0}`")]
    UnknownBase(String),
    #[error("loose bound variable #{0}")]
    LooseBound(usize),
}

impl Type {
    pub fn base(name: &str) -> Type {
        Type::Base(name.to_string())
    }

    pub fn e() -> Type {
        Type::base("e")
    }

    pub fn t() -> Type {
        Type::base("t")
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn set(elem: Type) -> Type {
        Type::Set(Box::new(elem))
    }

    /// `args[0] > args[1] > ... > result`
    pub fn curried(args: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter().rev().fold(result, |acc, a| Type::arrow(a, acc))
    }

    pub fn fresh_var() -> Type {
        Type::Var(NEXT_TYVAR.fetch_add(1, Ordering::Relaxed))
    }

    pub fn is_concrete(&self) -> bool {
        match self {
            Type::Base(_) => true,
            Type::Arrow(a, b) => a.is_concrete() && b.is_concrete(),
            Type::Set(a) => a.is_concrete(),
            Type::Var(_) => false,
        }
    }

    /// Splits `a1 > ... > an > r` into `([a1..an], r)` where `r` is not an arrow.
    pub fn uncurry(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut ty = self;
        while let Type::Arrow(a, b) = ty {
            args.push(a.as_ref());
            ty = b;
        }
        (args, ty)
    }

    pub fn arity(&self) -> usize {
        self.uncurry().0.len()
    }

    pub fn target(&self) -> &Type {
        self.uncurry().1
    }

    /// Order of the type: base and set types have order 1, `a > b` has
    /// `max(ord(a) + 1, ord(b))`.
    pub fn order(&self) -> Result<usize, TypeError> {
        match self {
            Type::Base(_) => Ok(1),
            Type::Set(a) => a.order(),
            Type::Arrow(a, b) => Ok((a.order()? + 1).max(b.order()?)),
            Type::Var(_) => Err(TypeError::NotConcrete(self.clone())),
        }
    }

    fn occurs(&self, v: u32) -> bool {
        match self {
            Type::Base(_) => false,
            Type::Arrow(a, b) => a.occurs(v) || b.occurs(v),
            Type::Set(a) => a.occurs(v),
            Type::Var(w) => *w == v,
        }
    }

    pub fn vars(&self, out: &mut Vec<u32>) {
        match self {
            Type::Base(_) => {}
            Type::Arrow(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Type::Set(a) => a.vars(out),
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
        }
    }
}

pub fn order_of_type(ty: &Type) -> Result<usize, TypeError> {
    ty.order()
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(n) => write!(f, "{n}"),
            Type::Set(a) => write!(f, "set({a})"),
            Type::Var(v) => write!(f, "?{v}"),
            Type::Arrow(a, b) => {
                if let Type::Arrow(..) = a.as_ref() {
                    write!(f, "({a})>{b}")
                } else {
                    write!(f, "{a}>{b}")
                }
            }
        }
    }
}

/// Bindings for type variables, kept in triangular form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeSubst {
    map: BTreeMap<u32, Type>,
}

impl TypeSubst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, v: u32) -> Option<&Type> {
        self.map.get(&v)
    }

    /// Fully resolves `ty` under the current bindings.
    pub fn apply(&self, ty: &Type) -> Type {
        match ty {
            Type::Base(_) => ty.clone(),
            Type::Arrow(a, b) => Type::arrow(self.apply(a), self.apply(b)),
            Type::Set(a) => Type::set(self.apply(a)),
            Type::Var(v) => match self.map.get(v) {
                Some(t) => self.apply(t),
                None => ty.clone(),
            },
        }
    }

    pub fn bind(&mut self, v: u32, ty: Type) -> Result<(), TypeError> {
        let ty = self.apply(&ty);
        if ty == Type::Var(v) {
            return Ok(());
        }
        if ty.occurs(v) {
            return Err(TypeError::Occurs(v, ty));
        }
        self.map.insert(v, ty);
        Ok(())
    }

    /// First-order unification of two types.
    pub fn unify(&mut self, a: &Type, b: &Type) -> Result<(), TypeError> {
        let a = self.apply(a);
        let b = self.apply(b);
        match (&a, &b) {
            (Type::Var(v), _) => self.bind(*v, b),
            (_, Type::Var(w)) => self.bind(*w, a),
            (Type::Base(x), Type::Base(y)) if x == y => Ok(()),
            (Type::Set(x), Type::Set(y)) => self.unify(x, y),
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            _ => Err(TypeError::Mismatch { expected: a.clone(), found: b.clone() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_recurrence() {
        assert_eq!(Type::e().order().unwrap(), 1);
        assert_eq!(Type::arrow(Type::e(), Type::t()).order().unwrap(), 2);
        let et = Type::arrow(Type::e(), Type::t());
        assert_eq!(Type::arrow(et.clone(), Type::t()).order().unwrap(), 3);
        assert_eq!(Type::set(et).order().unwrap(), 2);
        assert!(Type::fresh_var().order().is_err());
    }

    #[test]
    fn display_parenthesises_left_arrows() {
        let et = Type::arrow(Type::e(), Type::t());
        assert_eq!(Type::arrow(et.clone(), Type::t()).to_string(), "(e>t)>t");
        assert_eq!(Type::arrow(Type::e(), et).to_string(), "e>e>t");
    }

    #[test]
    fn unify_binds_and_rejects() {
        let mut s = TypeSubst::new();
        let v = Type::fresh_var();
        let w = Type::fresh_var();
        s.unify(&Type::arrow(v.clone(), Type::t()), &Type::arrow(Type::e(), w.clone()))
            .unwrap();
        assert_eq!(s.apply(&v), Type::e());
        assert_eq!(s.apply(&w), Type::t());
        assert!(s.unify(&v, &Type::t()).is_err());
        let u = Type::fresh_var();
        assert!(matches!(
            s.unify(&u, &Type::arrow(u.clone(), Type::e())),
            Err(TypeError::Occurs(..))
        ));
    }
}
