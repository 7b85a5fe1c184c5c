//! Focus semantic values by higher-order matching.
//!
//! Terms of the simply-typed λ-calculus are the semantic representations.
//! The focus semantic value of an utterance is read off the solutions of
//! the ground equation `Gd(F1)...(Fn) = Sem`, solved by Huet-style
//! higher-order matching; focus operators (`only`, `also`) quantify over it,
//! and second-occurrence expressions inherit it from their source clause by
//! solving a small system of equations with delayed typing.

pub mod focus;
pub mod logic;
pub mod normalize;
pub mod scenario;
pub mod signature;
pub mod soe;
pub mod subst;
pub mod syntax;
pub mod term;
pub mod types;
pub mod typing;
pub mod unify;

pub use normalize::normalize;
pub use signature::Signature;
pub use subst::{apply_subst, Substitution};
pub use syntax::{format_term, parse_term, parse_type};
pub use term::{alpha_equal, Term};
pub use types::{order_of_type, Type};
pub use typing::infer_type;
