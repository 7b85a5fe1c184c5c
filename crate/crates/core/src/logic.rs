//! Logical vocabulary. These are ordinary rigid constants whose types are
//! instantiated per use.

use crate::term::Term;
use crate::types::Type;

pub const FORALL: &str = "forall";
pub const EXISTS: &str = "exists";
pub const AND: &str = "and";
pub const IMP: &str = "imp";
pub const NOT: &str = "not";
pub const EQ: &str = "eq";
pub const IN: &str = "in";
/// Prefix of the focus-semantic-value formers `alt0`, `alt1`, ...
pub const ALT: &str = "alt";

/// Builtin families. The type parameters are free type variables that the
/// elaborator resolves from context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Forall,
    Exists,
    And,
    Imp,
    Not,
    Eq,
    In,
    Alt(usize),
}

impl Builtin {
    pub fn from_name(name: &str) -> Option<Builtin> {
        Some(match name {
            FORALL => Builtin::Forall,
            EXISTS => Builtin::Exists,
            AND => Builtin::And,
            IMP => Builtin::Imp,
            NOT => Builtin::Not,
            EQ => Builtin::Eq,
            IN => Builtin::In,
            _ => {
                let n = name.strip_prefix(ALT)?;
                if n.is_empty() || !n.bytes().all(|b| b.is_ascii_digit()) || (n.len() > 1 && n.starts_with('0')) {
                    return None;
                }
                Builtin::Alt(n.parse().ok()?)
            }
        })
    }

    pub fn is_reserved(name: &str) -> bool {
        Builtin::from_name(name).is_some()
    }

    /// A fresh instance of the builtin's type scheme.
    pub fn fresh_type(self) -> Type {
        let t = Type::t();
        match self {
            Builtin::Forall | Builtin::Exists => {
                let a = Type::fresh_var();
                Type::arrow(Type::arrow(a, t.clone()), t)
            }
            Builtin::And | Builtin::Imp => Type::curried([t.clone(), t.clone()], t),
            Builtin::Not => Type::arrow(t.clone(), t),
            Builtin::Eq => {
                let a = Type::fresh_var();
                Type::curried([a.clone(), a], t)
            }
            Builtin::In => {
                let a = Type::fresh_var();
                Type::curried([a.clone(), Type::set(a)], t)
            }
            Builtin::Alt(n) => {
                let args: Vec<Type> = (0..n).map(|_| Type::fresh_var()).collect();
                let elem = Type::fresh_var();
                Type::arrow(Type::curried(args, elem.clone()), Type::set(elem))
            }
        }
    }
}

pub fn forall(ty: &Type) -> Term {
    Term::constant(FORALL, Type::arrow(Type::arrow(ty.clone(), Type::t()), Type::t()))
}

pub fn exists(ty: &Type) -> Term {
    Term::constant(EXISTS, Type::arrow(Type::arrow(ty.clone(), Type::t()), Type::t()))
}

pub fn and() -> Term {
    Term::constant(AND, Type::curried([Type::t(), Type::t()], Type::t()))
}

pub fn imp() -> Term {
    Term::constant(IMP, Type::curried([Type::t(), Type::t()], Type::t()))
}

pub fn not() -> Term {
    Term::constant(NOT, Type::arrow(Type::t(), Type::t()))
}

pub fn eq(ty: &Type) -> Term {
    Term::constant(EQ, Type::curried([ty.clone(), ty.clone()], Type::t()))
}

pub fn member(ty: &Type) -> Term {
    Term::constant(IN, Type::curried([ty.clone(), Type::set(ty.clone())], Type::t()))
}

/// `alt_n : (β1 > ... > βn > α) > set(α)`
pub fn alt(arg_types: &[Type], elem: &Type) -> Term {
    let gd_ty = Type::curried(arg_types.iter().cloned(), elem.clone());
    Term::constant(&format!("{ALT}{}", arg_types.len()), Type::arrow(gd_ty, Type::set(elem.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        assert_eq!(Builtin::from_name("alt2"), Some(Builtin::Alt(2)));
        assert_eq!(Builtin::from_name("alt0"), Some(Builtin::Alt(0)));
        assert_eq!(Builtin::from_name("alt"), None);
        assert_eq!(Builtin::from_name("alt01"), None);
        assert_eq!(Builtin::from_name("alternative"), None);
        assert!(Builtin::is_reserved("forall"));
        assert!(!Builtin::is_reserved("l"));
    }
}
