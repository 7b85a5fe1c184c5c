use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use crate::focus::{
    analyze_operator_chain, build_ground_equation, fsv_member, ground_candidates, interpret_also, interpret_only,
    por_filter, FocusError, Fsv, PorMode,
};
use crate::normalize::normalize;
use crate::soe::{resolve_soe, SoeError};
use crate::subst::Substitution;
use crate::syntax::format_term;
use crate::term::Term;
use crate::typing::infer_concrete;
use crate::unify::{
    check_order, ho_match, pre_unify, simplify, verify, Limit, Problem, SearchLimits, Simplified, UnifyError,
};

use super::{parse_scenario, Expect, Scenario, ScenarioError, Task, TaskKind};

/// Command-line overrides; `None` keeps the scenario's setting.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub max_depth: Option<usize>,
    pub max_solutions: Option<usize>,
    pub max_nodes: Option<usize>,
    pub por: Option<PorMode>,
    pub verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    None,
    Limit,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::None => "none",
            Status::Limit => "limit",
            Status::Error => "error",
        }
    }
}

/// A substitution returned by a solver together with the problem it solves.
#[derive(Clone, Debug)]
pub struct Audit {
    pub problem: Problem,
    pub substitution: Substitution,
    /// Pre-unifiers may leave flex-flex pairs unsolved.
    pub pre_unifier: bool,
}

impl Audit {
    fn full(problem: &Problem, substitution: Substitution) -> Audit {
        Audit { problem: problem.clone(), substitution, pre_unifier: false }
    }

    /// Solvers' answers must make both sides equal; a pre-unifier must at
    /// least reduce the problem to flex-flex pairs.
    pub fn holds(&self) -> bool {
        if !self.pre_unifier {
            return verify(&self.substitution, &self.problem);
        }
        let pairs = self
            .problem
            .pairs()
            .iter()
            .map(|(l, r)| (normalize(&self.substitution.apply(l)), normalize(&self.substitution.apply(r))))
            .collect();
        match Problem::new(pairs) {
            Ok(p) => matches!(simplify(&p), Simplified::Simplified { flex_rigid, .. } if flex_rigid.is_empty()),
            Err(_) => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TaskReport {
    pub index: usize,
    pub line: usize,
    pub header: String,
    /// Each solution is a list of printed bindings.
    pub solutions: Vec<Vec<(String, Term)>>,
    pub notes: Vec<String>,
    pub verbose_notes: Vec<String>,
    pub status: Status,
    pub expect: Expect,
    pub error: Option<String>,
    /// Process exit code this task asks for; 0 when it succeeded.
    pub code: i32,
    pub elapsed: Duration,
    pub audits: Vec<Audit>,
    /// Highest order of an unknown in any problem handed to a solver.
    pub max_order: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub tasks: Vec<TaskReport>,
}

impl Report {
    /// The code of the first task that failed, or 0.
    pub fn exit_code(&self) -> i32 {
        self.tasks.iter().map(|t| t.code).find(|&c| c != 0).unwrap_or(0)
    }

    pub fn render(&self, verbose: bool) -> String {
        let mut out = String::new();
        for (i, t) in self.tasks.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "task {}: {}", t.index, t.header);
            for note in &t.notes {
                let _ = writeln!(out, "  {note}");
            }
            if verbose {
                for note in &t.verbose_notes {
                    let _ = writeln!(out, "  {note}");
                }
            }
            for (k, sol) in t.solutions.iter().enumerate() {
                for (var, term) in sol {
                    let _ = writeln!(out, "solution {}: {var} := {}", k + 1, format_term(term));
                }
            }
            if let Some(e) = &t.error {
                let _ = writeln!(out, "error: {e}");
            }
            if t.max_order > 3 {
                let _ = writeln!(out, "warning: problem order {} exceeds 3", t.max_order);
            }
            let _ = writeln!(out, "status: {}", t.status.as_str());
            if t.code == 1 {
                let _ = writeln!(out, "expectation failed: expected {}, got {}", t.expect, t.solutions.len());
            }
            if verbose {
                let _ = writeln!(out, "time: {:.3} ms", t.elapsed.as_secs_f64() * 1e3);
            }
        }
        out
    }
}

/// Error raised while running a task, with the exit code it maps to.
struct Failure {
    code: i32,
    status: Status,
    msg: String,
}

impl From<FocusError> for Failure {
    fn from(e: FocusError) -> Self {
        match e {
            FocusError::Type(t) => Failure { code: 3, status: Status::Error, msg: t.to_string() },
            FocusError::LimitExceeded(l) => limit(l),
            FocusError::NoSolution => Failure { code: 0, status: Status::None, msg: String::new() },
            FocusError::Unify(UnifyError::Type(t)) => Failure { code: 3, status: Status::Error, msg: t.to_string() },
            other => Failure { code: 2, status: Status::Error, msg: other.to_string() },
        }
    }
}

impl From<UnifyError> for Failure {
    fn from(e: UnifyError) -> Self {
        FocusError::from(e).into()
    }
}

impl From<SoeError> for Failure {
    fn from(e: SoeError) -> Self {
        match e {
            SoeError::Type(t) => Failure { code: 3, status: Status::Error, msg: t.to_string() },
            SoeError::LimitExceeded(l) => limit(l),
            SoeError::NoSolution => Failure { code: 0, status: Status::None, msg: String::new() },
            other => Failure { code: 2, status: Status::Error, msg: other.to_string() },
        }
    }
}

fn limit(l: Limit) -> Failure {
    Failure { code: 4, status: Status::Limit, msg: format!("search limit exceeded ({l})") }
}

struct Runner<'a> {
    sc: &'a Scenario,
    opts: &'a RunOptions,
    fsvs: BTreeMap<String, Vec<Fsv>>,
}

struct Outcome<'r> {
    rep: &'r mut TaskReport,
}

impl Outcome<'_> {
    fn solution(&mut self, bindings: Vec<(String, Term)>) {
        self.rep.solutions.push(bindings);
    }

    fn problem(&mut self, p: &Problem) {
        self.rep.max_order = self.rep.max_order.max(check_order(p));
    }

    fn truncated(&mut self, l: Option<Limit>) {
        if let Some(l) = l {
            self.rep.notes.push(format!("search truncated ({l})"));
        }
    }
}

impl Runner<'_> {
    fn limits(&self, task: &Task) -> SearchLimits {
        SearchLimits {
            max_depth: self.opts.max_depth.unwrap_or(task.limits.max_depth),
            max_solutions: self.opts.max_solutions.unwrap_or(task.limits.max_solutions),
            max_nodes: self.opts.max_nodes.unwrap_or(task.limits.max_nodes),
        }
    }

    fn run_task(&mut self, index: usize, task: &Task) -> TaskReport {
        let mut rep = TaskReport {
            index,
            line: task.line,
            header: task.text.clone(),
            solutions: Vec::new(),
            notes: Vec::new(),
            verbose_notes: Vec::new(),
            status: Status::None,
            expect: task.expect,
            error: None,
            code: 0,
            elapsed: Duration::ZERO,
            audits: Vec::new(),
            max_order: 0,
        };
        let start = Instant::now();
        let res = self.execute(task, &mut Outcome { rep: &mut rep });
        rep.elapsed = start.elapsed();
        match res {
            Ok(()) => {
                rep.status = if rep.solutions.is_empty() { Status::None } else { Status::Ok };
            }
            Err(f) => {
                rep.status = f.status;
                rep.code = f.code;
                if !f.msg.is_empty() {
                    rep.error = Some(f.msg);
                }
            }
        }
        if rep.code == 0 && !task.expect.met_by(rep.solutions.len()) {
            rep.code = 1;
        }
        rep
    }

    fn execute(&mut self, task: &Task, out: &mut Outcome) -> Result<(), Failure> {
        let lim = self.limits(task);
        let mode = self.opts.por.unwrap_or(task.por);
        match &task.kind {
            TaskKind::Ground { sem, foci } => {
                let found = self.ground(sem, foci, &lim, mode, out);
                if let Some(label) = &task.label {
                    self.fsvs.insert(label.clone(), found.as_ref().map(|(_, f)| f.clone()).unwrap_or_default());
                }
                let (name, fsvs) = found?;
                for fsv in fsvs {
                    out.solution(vec![(name.clone(), fsv.gd)]);
                }
            }
            TaskKind::Member { candidate, source } => {
                let fsvs = self.fsvs.get(source).cloned().unwrap_or_default();
                for fsv in &fsvs {
                    let Some(witnesses) = fsv_member(fsv, candidate, &lim)? else {
                        continue;
                    };
                    let names: Vec<String> = (1..=fsv.arity).map(|i| format!("F{i}")).collect();
                    let vars: Vec<Term> =
                        names.iter().zip(&fsv.argument_types).map(|(n, ty)| Term::free(n, ty.clone())).collect();
                    let problem = Problem::single(Term::apply(fsv.gd.clone(), vars), candidate.clone())?;
                    let mut sigma = Substitution::new();
                    for (n, w) in names.iter().zip(&witnesses) {
                        sigma.bind(n, w);
                    }
                    out.problem(&problem);
                    out.rep.audits.push(Audit::full(&problem, sigma));
                    out.solution(names.into_iter().zip(witnesses).collect());
                }
            }
            TaskKind::Only { np, vp, focus } | TaskKind::Also { np, vp, focus } => {
                let only = matches!(task.kind, TaskKind::Only { .. });
                let (name, fsvs) = self.ground(vp, std::slice::from_ref(focus), &lim, mode, out)?;
                for fsv in fsvs {
                    let reading =
                        if only { interpret_only(np, vp, &fsv)? } else { interpret_also(np, vp, &fsv)? };
                    out.solution(vec![(name.clone(), fsv.gd), ("Sem".to_string(), reading)]);
                }
            }
            TaskKind::Chain { np, vp, ops } => {
                let a = analyze_operator_chain(vp, ops, np, &lim, mode)?;
                for (k, stage) in a.stages.iter().enumerate() {
                    for geq in &stage.equations {
                        let p = geq.problem()?;
                        out.problem(&p);
                        out.rep.verbose_notes.push(format!("stage {} equation: {geq}", k + 1));
                    }
                    for (fsv, &src) in stage.fsvs.iter().zip(&stage.sources) {
                        let geq = &stage.equations[src];
                        out.rep.audits.push(Audit::full(
                            &geq.problem()?,
                            Substitution::singleton(&geq.gd_var.name, fsv.gd.clone()),
                        ));
                        out.rep.notes.push(format!(
                            "stage {} ({} {}): {} := {}",
                            k + 1,
                            stage.operator,
                            format_term(&stage.focus),
                            geq.gd_var.name,
                            format_term(&fsv.gd)
                        ));
                    }
                }
                out.truncated(a.truncated);
                for r in a.readings {
                    out.solution(vec![("Sem".to_string(), r)]);
                }
            }
            TaskKind::Soe(p) => {
                let results = resolve_soe(p, &lim, mode)?;
                let sys = crate::soe::build_soe_equations(p)?;
                for eq in &sys.equations {
                    out.rep.verbose_notes.push(format!("equation: {eq}"));
                }
                for r in results {
                    let mut sigma = Substitution::new();
                    let mut bindings = vec![(sys.an_var.name.clone(), r.an.clone())];
                    sigma.bind(&sys.an_var.name, &r.an);
                    if let (Some(v), Some(gd)) = (&sys.gd_var, &r.gd) {
                        bindings.push((v.name.clone(), gd.clone()));
                        sigma.bind(&v.name, gd);
                    }
                    for (v, f) in sys.focus_vars.iter().zip(&r.foci) {
                        bindings.push((v.name.clone(), f.clone()));
                        sigma.bind(&v.name, f);
                    }
                    bindings.push(("TSem".to_string(), r.target_sem.clone()));
                    for (l, rhs) in &r.steps {
                        out.problem(&Problem::single(l.clone(), rhs.clone())?);
                        out.rep.verbose_notes.push(format!("solved: {} = {}", format_term(l), format_term(rhs)));
                    }
                    let problem = Problem::new(r.equations.clone())?;
                    out.problem(&problem);
                    out.rep.audits.push(Audit::full(&problem, sigma));
                    out.solution(bindings);
                }
            }
            TaskKind::Match { lhs, rhs } => {
                let problem = Problem::single(lhs.clone(), rhs.clone())?;
                out.problem(&problem);
                let sols = ho_match(&problem, &lim)?;
                out.truncated(sols.truncated);
                let vars = problem.free_vars();
                for sigma in sols.items {
                    out.rep.audits.push(Audit::full(&problem, sigma.clone()));
                    out.solution(
                        vars.iter()
                            .filter_map(|v| sigma.get(&v.name).map(|t| (v.name.clone(), t.clone())))
                            .collect(),
                    );
                }
            }
            TaskKind::Unify { lhs, rhs } => {
                let problem = Problem::single(lhs.clone(), rhs.clone())?;
                out.problem(&problem);
                let sols = pre_unify(&problem, &lim)?;
                out.truncated(sols.truncated);
                let vars = problem.free_vars();
                for (k, sol) in sols.items.into_iter().enumerate() {
                    for (l, r) in &sol.residual_flex_flex {
                        out.rep.notes.push(format!(
                            "solution {} leaves {} = {}",
                            k + 1,
                            format_term(l),
                            format_term(r)
                        ));
                    }
                    out.rep.audits.push(Audit {
                        problem: problem.clone(),
                        substitution: sol.substitution.clone(),
                        pre_unifier: !sol.residual_flex_flex.is_empty(),
                    });
                    out.solution(
                        vars.iter()
                            .filter_map(|v| sol.substitution.get(&v.name).map(|t| (v.name.clone(), t.clone())))
                            .collect(),
                    );
                }
            }
        }
        Ok(())
    }

    /// Solves a ground equation, auditing every matcher before the primary
    /// occurrence restriction is applied.
    fn ground(
        &self,
        sem: &Term,
        foci: &[Term],
        lim: &SearchLimits,
        mode: PorMode,
        out: &mut Outcome,
    ) -> Result<(String, Vec<Fsv>), Failure> {
        infer_concrete(sem).map_err(FocusError::from)?;
        let geq = build_ground_equation(sem, foci, &self.sc.signature)?;
        let problem = geq.problem()?;
        out.problem(&problem);
        out.rep.verbose_notes.push(format!("equation: {geq}"));
        let cands = ground_candidates(&geq, lim)?;
        out.truncated(cands.truncated);
        for sigma in &cands.items {
            out.rep.audits.push(Audit::full(&problem, sigma.clone()));
        }
        let kept = por_filter(&cands.items, &geq, mode);
        if kept.len() < cands.items.len() {
            out.rep
                .verbose_notes
                .push(format!("{} of {} solution(s) removed by POR ({mode})", cands.items.len() - kept.len(), cands.items.len()));
        }
        let fsvs = kept
            .iter()
            .map(|s| Fsv::new(s.get(&geq.gd_var.name).expect("matcher binds the ground variable").clone(), geq.arity()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((geq.gd_var.name.clone(), fsvs))
    }
}

/// Runs every task in order.
pub fn run_scenario(sc: &Scenario, opts: &RunOptions) -> Report {
    let mut runner = Runner { sc, opts, fsvs: BTreeMap::new() };
    let tasks = sc.tasks.iter().enumerate().map(|(i, t)| runner.run_task(i + 1, t)).collect();
    Report { tasks }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

impl LoadError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Scenario(e) if e.is_type_error() => 3,
            _ => 2,
        }
    }
}

/// Reads, parses and runs a scenario file.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<Report, LoadError> {
    let src = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    let sc = parse_scenario(&src)?;
    Ok(run_scenario(&sc, opts))
}
