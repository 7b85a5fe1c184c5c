use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::logic::Builtin;
use crate::term::Term;
use crate::types::{Type, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("`{0}` is already declared")]
    Duplicate(String),
    #[error("`{0}` is a reserved name")]
    Reserved(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Declared base types, constants, metas (free variables) and named terms.
#[derive(Clone, Debug)]
pub struct Signature {
    bases: BTreeSet<String>,
    consts: BTreeMap<String, Type>,
    metas: BTreeMap<String, Type>,
    lets: BTreeMap<String, Term>,
    /// Declaration order of user constants.
    const_order: Vec<String>,
}

impl Default for Signature {
    fn default() -> Self {
        Signature {
            bases: ["e", "t"].iter().map(|s| s.to_string()).collect(),
            consts: BTreeMap::new(),
            metas: BTreeMap::new(),
            lets: BTreeMap::new(),
            const_order: Vec::new(),
        }
    }
}

const KEYWORDS: &[&str] = &["lam", "set"];

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_fresh(&self, name: &str) -> Result<(), SignatureError> {
        if Builtin::is_reserved(name) || KEYWORDS.contains(&name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        if self.consts.contains_key(name) || self.metas.contains_key(name) || self.lets.contains_key(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn check_type(&self, ty: &Type) -> Result<(), TypeError> {
        match ty {
            Type::Base(b) if self.bases.contains(b) => Ok(()),
            Type::Base(b) => Err(TypeError::UnknownBase(b.clone())),
            Type::Arrow(a, b) => {
                self.check_type(a)?;
                self.check_type(b)
            }
            Type::Set(a) => self.check_type(a),
            Type::Var(_) => Ok(()),
        }
    }

    pub fn declare_base(&mut self, name: &str) -> Result<(), SignatureError> {
        if KEYWORDS.contains(&name) || !self.bases.insert(name.to_string()) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn declare_const(&mut self, name: &str, ty: Type) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        self.check_type(&ty)?;
        self.consts.insert(name.to_string(), ty);
        self.const_order.push(name.to_string());
        Ok(())
    }

    /// Declares a meta; `None` gives it an unknown type.
    pub fn declare_meta(&mut self, name: &str, ty: Option<Type>) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        let ty = match ty {
            Some(ty) => {
                self.check_type(&ty)?;
                ty
            }
            None => Type::fresh_var(),
        };
        self.metas.insert(name.to_string(), ty);
        Ok(())
    }

    pub fn define(&mut self, name: &str, term: Term) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        self.lets.insert(name.to_string(), term);
        Ok(())
    }

    pub fn has_base(&self, name: &str) -> bool {
        self.bases.contains(name)
    }

    pub fn const_type(&self, name: &str) -> Option<&Type> {
        self.consts.get(name)
    }

    pub fn meta_type(&self, name: &str) -> Option<&Type> {
        self.metas.get(name)
    }

    pub fn definition(&self, name: &str) -> Option<&Term> {
        self.lets.get(name)
    }

    /// User constants in declaration order.
    pub fn constants(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.const_order.iter().map(|n| (n.as_str(), &self.consts[n]))
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.consts.contains_key(name) || self.metas.contains_key(name) || self.lets.contains_key(name)
    }

    /// Convenience constructor for tests and examples: `[("l", "e>e>t"), ...]`.
    pub fn with_consts(decls: &[(&str, &str)]) -> Result<Signature, crate::syntax::ParseError> {
        let mut sig = Signature::new();
        for (name, ty) in decls {
            let ty = crate::syntax::parse_type(ty, &sig)?;
            sig.declare_const(name, ty)
                .map_err(|e| crate::syntax::ParseError::new(0, e.to_string()))?;
        }
        Ok(sig)
    }
}
