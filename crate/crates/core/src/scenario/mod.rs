//! Line-oriented scenario files.
//!
//! ```text
//! basetype <ident>
//! const <ident> : <type>
//! meta <ident> : <type> | ?
//! let <ident> = <term>
//! set por dsp|strict|off
//! set max_depth|max_solutions|max_nodes <int>
//! task ground <term> focus <term> {, <term>} [as <ident>]
//! task member <term> in <ident>
//! task only <np> <vp> focus <term>
//! task also <np> <vp> focus <term>
//! task chain <np> <vp> ops (only <term>) (also <term>) ...
//! task soe source <term> pairs (<term>, <term>) ... template <term>
//! task match <term> == <term>
//! task unify <term> == <term>
//! ```
//!
//! Any task may end in `expect none` or `expect <int>`. `set` lines apply
//! to the tasks that follow them. Chain operators are listed innermost
//! first; `member` refers to a ground task by its `as` name.

mod run;

use std::fmt;

use thiserror::Error;

use crate::focus::{Operator, PorMode};
use crate::signature::{Signature, SignatureError};
use crate::soe::SoeProblem;
use crate::syntax::{ParseError, Parser, Tok};
use crate::term::Term;
use crate::unify::SearchLimits;

pub use run::{run_file, run_scenario, Audit, LoadError, Report, RunOptions, Status, TaskReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioErrorKind {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ScenarioError {
    pub line: usize,
    pub kind: ScenarioErrorKind,
}

impl ScenarioError {
    pub fn is_type_error(&self) -> bool {
        match &self.kind {
            ScenarioErrorKind::Parse(p) => p.is_type_error(),
            ScenarioErrorKind::Signature(SignatureError::Type(_)) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Expect {
    /// At least one solution.
    #[default]
    Some,
    None,
    Exactly(usize),
}

impl Expect {
    pub fn met_by(self, count: usize) -> bool {
        match self {
            Expect::Some => count > 0,
            Expect::None => count == 0,
            Expect::Exactly(n) => count == n,
        }
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Some => f.write_str("at least one solution"),
            Expect::None => f.write_str("no solution"),
            Expect::Exactly(n) => write!(f, "exactly {n} solution(s)"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum TaskKind {
    Ground { sem: Term, foci: Vec<Term> },
    Member { candidate: Term, source: String },
    Only { np: Term, vp: Term, focus: Term },
    Also { np: Term, vp: Term, focus: Term },
    Chain { np: Term, vp: Term, ops: Vec<(Operator, Term)> },
    Soe(SoeProblem),
    Match { lhs: Term, rhs: Term },
    Unify { lhs: Term, rhs: Term },
}

impl TaskKind {
    pub fn name(&self) -> &'static str {
        match self {
            TaskKind::Ground { .. } => "ground",
            TaskKind::Member { .. } => "member",
            TaskKind::Only { .. } => "only",
            TaskKind::Also { .. } => "also",
            TaskKind::Chain { .. } => "chain",
            TaskKind::Soe(_) => "soe",
            TaskKind::Match { .. } => "match",
            TaskKind::Unify { .. } => "unify",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Task {
    pub line: usize,
    /// Source text after `task`.
    pub text: String,
    pub kind: TaskKind,
    pub label: Option<String>,
    pub expect: Expect,
    pub limits: SearchLimits,
    pub por: PorMode,
}

#[derive(Clone, Debug, Default)]
pub struct Scenario {
    pub signature: Signature,
    pub tasks: Vec<Task>,
}

struct LineParser<'a> {
    p: Parser<'a>,
    line: usize,
}

impl LineParser<'_> {
    fn err(&self, kind: impl Into<ScenarioErrorKind>) -> ScenarioError {
        ScenarioError { line: self.line, kind: kind.into() }
    }

    fn invalid(&self, msg: impl Into<String>) -> ScenarioError {
        self.err(ScenarioErrorKind::Invalid(msg.into()))
    }

    fn wrap<T>(&self, r: Result<T, ParseError>) -> Result<T, ScenarioError> {
        r.map_err(|e| self.err(e))
    }

    fn term(&mut self) -> Result<Term, ScenarioError> {
        let r = self.p.parse_term();
        self.wrap(r)
    }

    fn ident(&mut self) -> Result<String, ScenarioError> {
        let r = self.p.ident();
        self.wrap(r)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ScenarioError> {
        let r = self.p.keyword(kw);
        self.wrap(r)
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ScenarioError> {
        let r = self.p.expect(tok, what);
        self.wrap(r)
    }

    fn number(&mut self) -> Result<usize, ScenarioError> {
        let r = self.p.number();
        let n = self.wrap(r)?;
        usize::try_from(n).map_err(|_| self.invalid("number out of range"))
    }

    fn finish(&self) -> Result<(), ScenarioError> {
        self.wrap(self.p.finish())
    }

    fn is_open_paren(&self) -> bool {
        matches!(self.p.peek(), Some(Tok::LParen { .. }))
    }
}

fn sig_error(line: usize, e: SignatureError) -> ScenarioError {
    ScenarioError { line, kind: e.into() }
}

/// Parses a whole scenario. Declarations take effect line by line, so every
/// name must be declared before it is used.
pub fn parse_scenario(src: &str) -> Result<Scenario, ScenarioError> {
    let mut sc = Scenario::default();
    let mut limits = SearchLimits::default();
    let mut por = PorMode::default();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let parser = Parser::new(text, &sc.signature).map_err(|e| ScenarioError { line, kind: e.into() })?;
        let mut lp = LineParser { p: parser, line };
        let directive = lp.ident()?;
        match directive.as_str() {
            "basetype" => {
                let name = lp.ident()?;
                lp.finish()?;
                sc.signature.declare_base(&name).map_err(|e| sig_error(line, e))?;
            }
            "const" | "meta" => {
                let name = lp.ident()?;
                lp.expect(&Tok::Colon, "`:`")?;
                let ty = if directive == "meta" && lp.p.eat(&Tok::Question) {
                    None
                } else {
                    let r = lp.p.parse_type();
                    Some(lp.wrap(r)?)
                };
                lp.finish()?;
                let res = match ty {
                    Some(ty) if directive == "const" => sc.signature.declare_const(&name, ty),
                    ty => sc.signature.declare_meta(&name, ty),
                };
                res.map_err(|e| sig_error(line, e))?;
            }
            "let" => {
                let name = lp.ident()?;
                lp.expect(&Tok::Assign, "`=`")?;
                let t = lp.term()?;
                lp.finish()?;
                sc.signature.define(&name, t).map_err(|e| sig_error(line, e))?;
            }
            "set" => {
                let key = lp.ident()?;
                match key.as_str() {
                    "por" => {
                        let mode = lp.ident()?;
                        por = mode.parse().map_err(|e: String| lp.invalid(e))?;
                    }
                    "max_depth" => limits.max_depth = lp.number()?,
                    "max_solutions" => limits.max_solutions = lp.number()?,
                    "max_nodes" => limits.max_nodes = lp.number()?,
                    other => return Err(lp.invalid(format!("unknown setting `{other}`"))),
                }
                lp.finish()?;
                limits.validate().map_err(|e| lp.invalid(e.to_string()))?;
            }
            "task" => {
                let body = text["task".len()..].trim().to_string();
                let (kind, label, expect) = parse_task(&mut lp, &sc.tasks)?;
                sc.tasks.push(Task { line, text: body, kind, label, expect, limits, por });
            }
            other => return Err(lp.invalid(format!("unknown directive `{other}`"))),
        }
    }
    Ok(sc)
}

fn parse_task(lp: &mut LineParser, earlier: &[Task]) -> Result<(TaskKind, Option<String>, Expect), ScenarioError> {
    let kind = lp.ident()?;
    let task = match kind.as_str() {
        "ground" => {
            let sem = lp.term()?;
            lp.keyword("focus")?;
            let mut foci = vec![lp.term()?];
            while lp.p.eat(&Tok::Comma) {
                foci.push(lp.term()?);
            }
            TaskKind::Ground { sem, foci }
        }
        "member" => {
            let candidate = lp.term()?;
            lp.keyword("in")?;
            let source = lp.ident()?;
            let known = earlier
                .iter()
                .any(|t| t.label.as_deref() == Some(source.as_str()) && matches!(t.kind, TaskKind::Ground { .. }));
            if !known {
                return Err(lp.invalid(format!("`{source}` does not name an earlier ground task")));
            }
            TaskKind::Member { candidate, source }
        }
        "only" | "also" => {
            let np = lp.term()?;
            let vp = lp.term()?;
            lp.keyword("focus")?;
            let focus = lp.term()?;
            if kind == "only" {
                TaskKind::Only { np, vp, focus }
            } else {
                TaskKind::Also { np, vp, focus }
            }
        }
        "chain" => {
            let np = lp.term()?;
            let vp = lp.term()?;
            lp.keyword("ops")?;
            let mut ops = Vec::new();
            while lp.is_open_paren() {
                lp.p.eat(&Tok::LParen { adjacent: false });
                let op = match lp.ident()?.as_str() {
                    "only" => Operator::Only,
                    "also" => Operator::Also,
                    other => return Err(lp.invalid(format!("unknown operator `{other}`"))),
                };
                let focus = lp.term()?;
                lp.expect(&Tok::RParen, "`)`")?;
                ops.push((op, focus));
            }
            TaskKind::Chain { np, vp, ops }
        }
        "soe" => {
            lp.keyword("source")?;
            let source_sem = lp.term()?;
            lp.keyword("pairs")?;
            let mut parallel_pairs = Vec::new();
            while lp.is_open_paren() {
                lp.p.eat(&Tok::LParen { adjacent: false });
                let sp = lp.term()?;
                lp.expect(&Tok::Comma, "`,`")?;
                let tp = lp.term()?;
                lp.expect(&Tok::RParen, "`)`")?;
                parallel_pairs.push((sp, tp));
            }
            lp.keyword("template")?;
            let template = lp.term()?;
            TaskKind::Soe(SoeProblem { source_sem, parallel_pairs, template })
        }
        "match" | "unify" => {
            let lhs = lp.term()?;
            lp.expect(&Tok::EqEq, "`==`")?;
            let rhs = lp.term()?;
            if kind == "match" {
                TaskKind::Match { lhs, rhs }
            } else {
                TaskKind::Unify { lhs, rhs }
            }
        }
        other => return Err(lp.invalid(format!("unknown task `{other}`"))),
    };
    let mut label = None;
    if lp.p.peek_keyword("as") {
        lp.keyword("as")?;
        let name = lp.ident()?;
        if earlier.iter().any(|t| t.label.as_deref() == Some(name.as_str())) {
            return Err(lp.invalid(format!("task name `{name}` is already used")));
        }
        label = Some(name);
    }
    let mut expect = Expect::Some;
    if lp.p.peek_keyword("expect") {
        lp.keyword("expect")?;
        expect = if lp.p.peek_keyword("none") {
            lp.keyword("none")?;
            Expect::None
        } else {
            Expect::Exactly(lp.number()?)
        };
    }
    lp.finish()?;
    Ok((task, label, expect))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "const l : e>e>t\nconst m : e\nconst j : e\n";

    #[test]
    fn declarations_and_tasks() {
        let src = format!(
            "{HEADER}# comment\nmeta X : e\nlet v = lam x:e. l(x,m)\nset por off\n\
             task ground v focus m as g expect 2\ntask member lam x:e. l(x,j) in g\ntask match X == m\n"
        );
        let sc = parse_scenario(&src).unwrap();
        assert_eq!(sc.tasks.len(), 3);
        assert_eq!(sc.tasks[0].por, PorMode::Off);
        assert_eq!(sc.tasks[0].expect, Expect::Exactly(2));
        assert_eq!(sc.tasks[0].label.as_deref(), Some("g"));
        assert_eq!(sc.tasks[0].text, "ground v focus m as g expect 2");
        assert!(matches!(sc.tasks[1].kind, TaskKind::Member { .. }));
        assert_eq!(sc.tasks[2].expect, Expect::Some);
    }

    #[test]
    fn chain_and_soe_syntax() {
        let src = format!(
            "{HEADER}const p : e\nmeta Gd : ?\n\
             task chain j lam x:e. l(x,m) ops (only m) (also m)\n\
             task soe source l(j,m) pairs (j, p) template l(p,m) expect 1\n"
        );
        let sc = parse_scenario(&src).unwrap();
        let TaskKind::Chain { ops, .. } = &sc.tasks[0].kind else { panic!() };
        assert_eq!(ops.len(), 2);
        assert_eq!(ops[0].0, Operator::Only);
        let TaskKind::Soe(p) = &sc.tasks[1].kind else { panic!() };
        assert_eq!(p.parallel_pairs.len(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_scenario("const l : e>e>t\ntask ground l(x,m) focus m\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(!err.is_type_error());
        let err = parse_scenario("const l : e>e>t\nconst m : e\ntask match l(m,m,m) == m\n").unwrap_err();
        assert!(err.is_type_error());
        let err = parse_scenario("task member m in nowhere\n").unwrap_err();
        assert!(matches!(err.kind, ScenarioErrorKind::Parse(_)));
        let err = parse_scenario(&format!("{HEADER}task member m in nowhere\n")).unwrap_err();
        assert!(matches!(err.kind, ScenarioErrorKind::Invalid(_)));
        assert!(parse_scenario("frobnicate\n").is_err());
        assert!(parse_scenario("set por sideways\n").is_err());
    }

    #[test]
    fn empty_scenario() {
        let sc = parse_scenario("# nothing\n\n").unwrap();
        assert!(sc.tasks.is_empty());
    }
}
