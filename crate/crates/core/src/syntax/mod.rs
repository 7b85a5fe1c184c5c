//! Surface syntax for types and terms.
//!
//! ```text
//! term ::= ident | '^' ident | term '(' term {',' term} ')' | 'lam' ident ':' type '.' term | '(' term ')'
//! type ::= ident | type '>' type | 'set' '(' type ')' | '(' type ')'
//! ```
//!
//! An application's `(` must follow the function without whitespace. `^`
//! marks a constant occurrence as primary. `#` starts a comment.

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

use crate::types::TypeError;

pub use lexer::Tok;
pub use parser::{parse_term, parse_type, Parser};
pub use printer::format_term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at offset {pos}")]
    Unknown { name: String, pos: usize },
    #[error("type error: {0}")]
    Type(#[from] TypeError),
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax { pos, msg: msg.into() }
    }

    pub fn is_type_error(&self) -> bool {
        matches!(self, ParseError::Type(_))
    }
}
