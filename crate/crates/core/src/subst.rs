use std::collections::BTreeMap;
use std::fmt;

use crate::normalize::normalize;
use crate::syntax::format_term;
use crate::term::Term;
use crate::typing::infer_type;
use crate::types::{TypeError, TypeSubst};

/// Idempotent map from free-variable names to closed-over-binders terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(name: &str, image: Term) -> Self {
        let mut s = Self::new();
        s.map.insert(name.to_string(), image);
        s
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.map.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Replaces free variables without normalizing.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        t.replace_free(&|v| self.map.get(&v.name).cloned())
    }

    /// Adds `name ↦ image`, keeping the substitution idempotent. Images are
    /// kept in normal form.
    pub fn bind(&mut self, name: &str, image: &Term) {
        let image = normalize(&self.apply(image));
        let single = Substitution::singleton(name, image.clone());
        for v in self.map.values_mut() {
            if v.free_vars().contains(name) {
                *v = normalize(&single.apply(v));
            }
        }
        self.map.insert(name.to_string(), image);
    }

    /// `other` after `self`: the result maps `x` to `other(self(x))`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out = self.clone();
        for (k, v) in &other.map {
            out.bind(k, v);
        }
        out
    }

    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Substitution {
        let mut out = Substitution::new();
        for n in names {
            if let Some(t) = self.map.get(n) {
                out.map.insert(n.to_string(), t.clone());
            }
        }
        out
    }

    pub fn map_images(&self, f: impl Fn(&Term) -> Term) -> Substitution {
        Substitution { map: self.map.iter().map(|(k, v)| (k.clone(), f(v))).collect() }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k} := {}", format_term(v))?;
        }
        write!(f, "}}")
    }
}

/// Type-checked, capture-avoiding application. The result is not normalized.
pub fn apply_subst(sigma: &Substitution, term: &Term) -> Result<Term, TypeError> {
    for v in term.free_var_list() {
        if let Some(image) = sigma.get(&v.name) {
            let ity = infer_type(image)?;
            let mut ts = TypeSubst::new();
            ts.unify(&v.ty, &ity).map_err(|_| TypeError::Mismatch {
                expected: v.ty.clone(),
                found: ity.clone(),
            })?;
        }
    }
    Ok(sigma.apply(term))
}
