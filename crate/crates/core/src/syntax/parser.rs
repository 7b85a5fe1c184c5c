use crate::logic::Builtin;
use crate::signature::Signature;
use crate::term::{Binder, Const, Term};
use crate::types::{Type, TypeSubst};
use crate::typing::infer_type_with;

use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

/// Surface syntax before name resolution.
#[derive(Clone, Debug)]
enum Raw {
    Ident { name: String, pos: usize, primary: bool },
    App { fun: Box<Raw>, args: Vec<Raw> },
    Lam { name: String, ty: Type, body: Box<Raw> },
}

/// Token-stream parser shared by the term parser and the scenario reader.
pub struct Parser<'s> {
    toks: Vec<Token>,
    idx: usize,
    end: usize,
    sig: &'s Signature,
}

impl<'s> Parser<'s> {
    pub fn new(src: &str, sig: &'s Signature) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, idx: 0, end: src.len(), sig })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.tok)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |t| t.pos)
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|t| t.tok.clone());
        self.idx += 1;
        t
    }

    pub fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(ref t) if same_kind(t, want) => Ok(()),
            _ => Err(ParseError::new(pos, format!("expected {what}"))),
        }
    }

    pub fn eat(&mut self, want: &Tok) -> bool {
        match self.peek() {
            Some(t) if same_kind(t, want) => {
                self.idx += 1;
                true
            }
            _ => false,
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(ParseError::new(pos, "expected identifier")),
        }
    }

    pub fn number(&mut self) -> Result<u64, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Number(n)) => Ok(n),
            _ => Err(ParseError::new(pos, "expected number")),
        }
    }

    pub fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    pub fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.peek_keyword(kw) {
            self.idx += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), format!("expected `{kw}`")))
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), "unexpected trailing input"))
        }
    }

    pub fn parse_type(&mut self) -> Result<Type, ParseError> {
        let dom = self.type_atom()?;
        if self.eat(&Tok::Gt) {
            Ok(Type::arrow(dom, self.parse_type()?))
        } else {
            Ok(dom)
        }
    }

    fn type_atom(&mut self) -> Result<Type, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::LParen { .. }) => {
                let ty = self.parse_type()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(ty)
            }
            Some(Tok::Ident(s)) if s == "set" && matches!(self.peek(), Some(Tok::LParen { .. })) => {
                self.idx += 1;
                let ty = self.parse_type()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Type::set(ty))
            }
            Some(Tok::Ident(s)) => {
                if self.sig.has_base(&s) {
                    Ok(Type::Base(s))
                } else {
                    Err(ParseError::new(pos, format!("unknown base type `{s}`")))
                }
            }
            _ => Err(ParseError::new(pos, "expected type")),
        }
    }

    fn raw_term(&mut self) -> Result<Raw, ParseError> {
        if self.peek_keyword("lam") {
            self.idx += 1;
            let name = self.ident()?;
            self.expect(&Tok::Colon, "`:`")?;
            let ty = self.parse_type()?;
            self.expect(&Tok::Dot, "`.`")?;
            let body = self.raw_term()?;
            return Ok(Raw::Lam { name, ty, body: Box::new(body) });
        }
        let mut t = self.raw_atom()?;
        while let Some(Tok::LParen { adjacent: true }) = self.peek() {
            self.idx += 1;
            let mut args = vec![self.raw_term()?];
            while self.eat(&Tok::Comma) {
                args.push(self.raw_term()?);
            }
            self.expect(&Tok::RParen, "`)` or `,`")?;
            t = Raw::App { fun: Box::new(t), args };
        }
        Ok(t)
    }

    fn raw_atom(&mut self) -> Result<Raw, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::LParen { .. }) => {
                let t = self.raw_term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Caret) => {
                let pos = self.pos();
                let name = self.ident()?;
                Ok(Raw::Ident { name, pos, primary: true })
            }
            Some(Tok::Ident(name)) if name != "lam" => Ok(Raw::Ident { name, pos, primary: false }),
            _ => Err(ParseError::new(pos, "expected term")),
        }
    }

    /// Parses and elaborates one term.
    pub fn parse_term(&mut self) -> Result<Term, ParseError> {
        let raw = self.raw_term()?;
        let term = resolve(&raw, &mut Vec::new(), self.sig)?;
        let mut subst = TypeSubst::new();
        infer_type_with(&term, &mut subst)?;
        Ok(term.resolve_types(&subst))
    }
}

fn same_kind(a: &Tok, b: &Tok) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

fn resolve(raw: &Raw, scope: &mut Vec<String>, sig: &Signature) -> Result<Term, ParseError> {
    match raw {
        Raw::Ident { name, pos, primary } => {
            let marked = |t: Term| -> Result<Term, ParseError> {
                match t {
                    Term::Const(c) if *primary => Ok(Term::Const(Const { primary: true, ..c })),
                    _ if *primary => Err(ParseError::new(*pos, "only constants can be marked primary")),
                    t => Ok(t),
                }
            };
            if let Some(k) = scope.iter().rev().position(|n| n == name) {
                return marked(Term::Bound(k));
            }
            if let Some(t) = sig.definition(name) {
                return marked(t.clone());
            }
            if let Some(ty) = sig.const_type(name) {
                return marked(Term::constant(name, ty.clone()));
            }
            if let Some(b) = Builtin::from_name(name) {
                return marked(Term::constant(name, b.fresh_type()));
            }
            if let Some(ty) = sig.meta_type(name) {
                return marked(Term::free(name, ty.clone()));
            }
            Err(ParseError::Unknown { name: name.clone(), pos: *pos })
        }
        Raw::App { fun, args } => {
            let f = resolve(fun, scope, sig)?;
            let args = args
                .iter()
                .map(|a| resolve(a, scope, sig))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::apply(f, args))
        }
        Raw::Lam { name, ty, body } => {
            scope.push(name.clone());
            let body = resolve(body, scope, sig);
            scope.pop();
            Ok(Term::Abs(Binder { name: name.clone(), ty: ty.clone() }, Box::new(body?)))
        }
    }
}

/// Parses a term written in the surface grammar; `f(a,b)` is curried.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.parse_term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_type(text: &str, sig: &Signature) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.parse_type()?;
    p.finish()?;
    Ok(t)
}
