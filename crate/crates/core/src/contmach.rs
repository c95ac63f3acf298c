//! A continuation machine for Mini-ML (call-by-name), its typing
//! judgments, and an ordered-logic program that runs it.
//!
//! Instructions wrap expressions with three more constants:
//! `ev e = APP(CON cEV, e)`, `return v = APP(CON cRETURN, v)` and
//! `app1 v e = APP(APP(CON cAPP1, v), e)`. A continuation frame `lam x. i`
//! is an abstraction whose body is an instruction.
//!
//! In the ordered program the continuation lives in the ordered context:
//! `init W` leftmost, then one `cont` atom per frame, top frame rightmost.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::error::Error;
use crate::formula::{Atom, Goal};
use crate::miniml::{self, as_app, as_fix, as_fun, tmpl, Tp};
use crate::search::{SearchConfig, SearchResult};
use crate::sl_olli::{solutions_olli, ClauseOlli, DbOlli, QueryOlli};
use crate::syntax::{instantiate, proper, Abstraction, ConstId, Expr};
use crate::unify::{MetaId, MetaStore, UTerm};

pub const EV: ConstId = ConstId::new("contmach", "cEV");
pub const RETURN: ConstId = ConstId::new("contmach", "cRETURN");
pub const APP1: ConstId = ConstId::new("contmach", "cAPP1");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instr {
    Ev(Expr),
    Return(Expr),
    App1(Expr, Expr),
}

impl Instr {
    pub fn to_expr(&self) -> Expr {
        match self {
            Instr::Ev(e) => Expr::app(Expr::con(EV), e.clone()),
            Instr::Return(v) => Expr::app(Expr::con(RETURN), v.clone()),
            Instr::App1(v, e) => Expr::app(Expr::app(Expr::con(APP1), v.clone()), e.clone()),
        }
    }

    pub fn from_expr(e: &Expr) -> Option<Instr> {
        let Expr::App(f, a) = e else { return None };
        match &**f {
            Expr::Con(c) if *c == EV => Some(Instr::Ev((**a).clone())),
            Expr::Con(c) if *c == RETURN => Some(Instr::Return((**a).clone())),
            Expr::App(g, v) if **g == Expr::Con(APP1) => Some(Instr::App1((**v).clone(), (**a).clone())),
            _ => None,
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |e: &Expr| crate::pretty::paren_term(e);
        match self {
            Instr::Ev(e) => write!(f, "ev {}", s(e)),
            Instr::Return(v) => write!(f, "return {}", s(v)),
            Instr::App1(v, e) => write!(f, "app1 {} {}", s(v), s(e)),
        }
    }
}

/// `Init`, or a continuation with one more frame on top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cont {
    Init,
    Push(Rc<Cont>, Abstraction),
}

impl Cont {
    /// Frames bottom to top.
    pub fn frames(&self) -> Vec<&Abstraction> {
        let mut out = vec![];
        let mut k = self;
        while let Cont::Push(rest, f) = k {
            out.push(f);
            k = rest;
        }
        out.reverse();
        out
    }

    pub fn depth(&self) -> usize {
        self.frames().len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MachineState {
    Run(Cont, Instr),
    Answer(Expr),
}

impl fmt::Display for MachineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineState::Answer(v) => write!(f, "answer {}", crate::pretty::paren_term(v)),
            MachineState::Run(k, i) => {
                f.write_str("init")?;
                for fr in k.frames() {
                    write!(f, "; {}", crate::pretty::term(&Expr::abs(fr.body.clone())))?;
                }
                write!(f, " <> {i}")
            }
        }
    }
}

fn instr_of(e: Expr) -> Option<Instr> {
    Instr::from_expr(&e)
}

/// One transition; `None` when no rule applies.
pub fn machine_step(s: &MachineState) -> Option<MachineState> {
    let MachineState::Run(k, i) = s else { return None };
    match i {
        Instr::Return(v) => match k {
            Cont::Init => Some(MachineState::Answer(v.clone())),
            Cont::Push(rest, fr) => {
                let next = instr_of(instantiate(fr, v).ok()?)?;
                Some(MachineState::Run((**rest).clone(), next))
            }
        },
        Instr::Ev(e) => {
            if as_fun(e).is_some() {
                Some(MachineState::Run(k.clone(), Instr::Return(e.clone())))
            } else if let Some(b) = as_fix(e) {
                Some(MachineState::Run(k.clone(), Instr::Ev(instantiate(&b, e).ok()?)))
            } else if let Some((e1, e2)) = as_app(e) {
                let frame = Abstraction::from_body(Instr::App1(Expr::bnd(0), e2.clone()).to_expr());
                Some(MachineState::Run(
                    Cont::Push(Rc::new(k.clone()), frame),
                    Instr::Ev(e1.clone()),
                ))
            } else {
                None
            }
        }
        Instr::App1(v, e2) => {
            let b = as_fun(v)?;
            Some(MachineState::Run(k.clone(), Instr::Ev(instantiate(&b, e2).ok()?)))
        }
    }
}

pub fn initial_state(e: &Expr) -> MachineState {
    MachineState::Run(Cont::Init, Instr::Ev(e.clone()))
}

/// Every state from `init <> ev e`, at most `fuel` transitions. The flag
/// says whether the last state is final (an answer or stuck).
pub fn machine_trace(e: &Expr, fuel: u64) -> Result<(Vec<MachineState>, bool), Error> {
    if !proper(e) {
        return Err(Error::NonProper);
    }
    let mut states = vec![initial_state(e)];
    for _ in 0..fuel {
        match machine_step(states.last().unwrap()) {
            Some(s) => states.push(s),
            None => return Ok((states, true)),
        }
    }
    let done = machine_step(states.last().unwrap()).is_none();
    Ok((states, done))
}

/// The answer of `e`, or `None` if there is none within `fuel` steps.
pub fn machine_run(e: &Expr, fuel: u64) -> Result<Option<Expr>, Error> {
    if !proper(e) {
        return Err(Error::NonProper);
    }
    let mut s = initial_state(e);
    for _ in 0..=fuel {
        if let MachineState::Answer(v) = &s {
            return Ok(Some(v.clone()));
        }
        match machine_step(&s) {
            Some(n) => s = n,
            None => return Ok(None),
        }
    }
    Ok(None)
}

pub fn ceval(e: UTerm, v: UTerm) -> Atom<UTerm> {
    Atom::new("ceval", vec![e, v])
}

pub fn exec(i: UTerm) -> Atom<UTerm> {
    Atom::new("exec", vec![i])
}

pub fn init(v: UTerm) -> Atom<UTerm> {
    Atom::new("init", vec![v])
}

/// `cont` takes a frame `lam x. i` as an `ABS` node.
pub fn cont(frame: UTerm) -> Atom<UTerm> {
    Atom::new("cont", vec![frame])
}

pub fn of(e: UTerm, t: UTerm) -> Atom<UTerm> {
    Atom::new("of", vec![e, t])
}

pub fn of_i(i: UTerm, t: UTerm) -> Atom<UTerm> {
    Atom::new("ofI", vec![i, t])
}

pub fn of_k(t: UTerm) -> Atom<UTerm> {
    Atom::new("ofK", vec![t])
}

fn ev(e: UTerm) -> UTerm {
    UTerm::app(UTerm::Con(EV), e)
}

fn ret(v: UTerm) -> UTerm {
    UTerm::app(UTerm::Con(RETURN), v)
}

fn app1(v: UTerm, e: UTerm) -> UTerm {
    UTerm::app(UTerm::app(UTerm::Con(APP1), v), e)
}

/// Typing of expressions, instructions and continuations, then `ceval`
/// and `exec`. Fifteen clauses.
pub fn db_contmach() -> DbOlli {
    use tmpl::*;
    let at = Goal::At;
    let c = |name, vars: &[(&'static str, u8)], head, ordered, intuit| ClauseOlli {
        name,
        vars: decls(vars),
        head,
        ordered,
        intuit,
    };
    let clauses = vec![
        c(
            "of_app",
            &[("E1", 0), ("E2", 0), ("T", 0), ("T'", 0)],
            of(app(v(0), v(1)), v(2)),
            vec![],
            vec![at(of(v(0), arrow(v(3), v(2)))), at(of(v(1), v(3)))],
        ),
        c(
            "of_fun",
            &[("E", 1), ("T1", 0), ("T2", 0)],
            of(fun(0), arrow(v(1), v(2))),
            vec![],
            vec![Goal::all(Goal::imp(of(x(), v(1)), at(of(ap(0, x()), v(2)))))],
        ),
        c(
            "of_fix",
            &[("E", 1), ("T", 0)],
            of(fix(0), v(1)),
            vec![],
            vec![Goal::all(Goal::imp(of(x(), v(1)), at(of(ap(0, x()), v(1)))))],
        ),
        c(
            "ofI_ev",
            &[("E", 0), ("T", 0)],
            of_i(ev(v(0)), v(1)),
            vec![],
            vec![at(of(v(0), v(1)))],
        ),
        c(
            "ofI_return",
            &[("V", 0), ("T", 0)],
            of_i(ret(v(0)), v(1)),
            vec![],
            vec![at(of(v(0), v(1)))],
        ),
        c(
            "ofI_app1",
            &[("V", 0), ("E", 0), ("T", 0), ("T2", 0)],
            of_i(app1(v(0), v(1)), v(2)),
            vec![],
            vec![at(of(v(0), arrow(v(3), v(2)))), at(of(v(1), v(3)))],
        ),
        c(
            "ofK_init",
            &[("T", 0), ("V", 0)],
            of_k(arrow(v(0), v(0))),
            vec![at(init(v(1)))],
            vec![],
        ),
        c(
            "ofK_cont",
            &[("K", 1), ("T1", 0), ("T2", 0), ("T", 0)],
            of_k(arrow(v(1), v(2))),
            vec![at(cont(UTerm::abs(ap(0, UTerm::Bnd(0))))), at(of_k(arrow(v(3), v(2))))],
            vec![Goal::all(Goal::imp(of(x(), v(1)), at(of_i(ap(0, x()), v(3)))))],
        ),
        c(
            "ceval",
            &[("E", 0), ("V", 0)],
            ceval(v(0), v(1)),
            vec![Goal::ord_imp(init(v(1)), at(exec(ev(v(0)))))],
            vec![],
        ),
        c("exec_init", &[("V", 0)], exec(ret(v(0))), vec![at(init(v(0)))], vec![]),
        c(
            "exec_cont",
            &[("K", 1), ("V", 0)],
            exec(ret(v(1))),
            vec![at(cont(UTerm::abs(ap(0, UTerm::Bnd(0))))), at(exec(ap(0, v(1))))],
            vec![],
        ),
        c(
            "exec_fun",
            &[("E", 1)],
            exec(ev(fun(0))),
            vec![at(exec(ret(fun(0))))],
            vec![],
        ),
        c(
            "exec_fix",
            &[("E", 1)],
            exec(ev(fix(0))),
            vec![at(exec(ev(ap(0, fix(0)))))],
            vec![],
        ),
        c(
            "exec_app",
            &[("E1", 0), ("E2", 0)],
            exec(ev(app(v(0), v(1)))),
            vec![Goal::ord_imp(
                cont(UTerm::abs(app1(UTerm::Bnd(0), v(1)))),
                at(exec(ev(v(0)))),
            )],
            vec![],
        ),
        c(
            "exec_app1",
            &[("E", 1), ("E2", 0)],
            exec(app1(fun(0), v(1))),
            vec![at(exec(ev(ap(0, v(1)))))],
            vec![],
        ),
    ];
    DbOlli::new(clauses, Expr::con(miniml::TP_I)).expect("built-in database is well formed")
}

/// What [`direct_typecheck`] is asked about.
#[derive(Clone, Copy, Debug)]
pub enum Subject<'a> {
    Expr(&'a Expr),
    Instr(&'a Instr),
    /// Checked against `t1 -> t2`.
    Cont(&'a Cont),
    State(&'a MachineState),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Var(u32),
    Base,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn of(t: &Tp) -> Ty {
        match t {
            Tp::Base => Ty::Base,
            Tp::Arrow(a, b) => Ty::Arrow(Box::new(Ty::of(a)), Box::new(Ty::of(b))),
        }
    }
}

/// First-order unification over types with variables.
#[derive(Default)]
struct Tc {
    subst: HashMap<u32, Ty>,
    next: u32,
}

impl Tc {
    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Var(self.next - 1)
    }

    fn walk(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Var(v) = t {
            match self.subst.get(&v) {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &Ty) -> bool {
        match self.walk(t) {
            Ty::Var(w) => v == w,
            Ty::Base => false,
            Ty::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        match (self.walk(a), self.walk(b)) {
            (Ty::Var(x), Ty::Var(y)) if x == y => true,
            (Ty::Var(x), t) | (t, Ty::Var(x)) => {
                if self.occurs(x, &t) {
                    return false;
                }
                self.subst.insert(x, t);
                true
            }
            (Ty::Base, Ty::Base) => true,
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            _ => false,
        }
    }

    /// `gamma[k]` types `VAR k`.
    fn expr(&mut self, gamma: &mut Vec<Ty>, e: &Expr, t: &Ty) -> bool {
        if let Expr::Var(k) = e {
            return match gamma.get(*k as usize).cloned() {
                Some(s) => self.unify(&s, t),
                None => false,
            };
        }
        if let Some(b) = as_fun(e) {
            let (a, r) = (self.fresh(), self.fresh());
            if !self.unify(t, &Ty::Arrow(Box::new(a.clone()), Box::new(r.clone()))) {
                return false;
            }
            return self.under(gamma, &b, a, |tc, g, body| tc.expr(g, body, &r));
        }
        if let Some(b) = as_fix(e) {
            return self.under(gamma, &b, t.clone(), |tc, g, body| tc.expr(g, body, t));
        }
        if let Some((l, r)) = as_app(e) {
            let a = self.fresh();
            let f = Ty::Arrow(Box::new(a.clone()), Box::new(t.clone()));
            return self.expr(gamma, l, &f) && self.expr(gamma, r, &a);
        }
        false
    }

    /// Opens `b` with `VAR gamma.len()` of type `a` and runs `k` on the body.
    fn under(
        &mut self,
        gamma: &mut Vec<Ty>,
        b: &Abstraction,
        a: Ty,
        k: impl FnOnce(&mut Tc, &mut Vec<Ty>, &Expr) -> bool,
    ) -> bool {
        let x = Expr::var(gamma.len() as u32);
        let Ok(body) = instantiate(b, &x) else { return false };
        gamma.push(a);
        let ok = k(self, gamma, &body);
        gamma.pop();
        ok
    }

    fn instr(&mut self, gamma: &mut Vec<Ty>, i: &Instr, t: &Ty) -> bool {
        match i {
            Instr::Ev(e) | Instr::Return(e) => self.expr(gamma, e, t),
            Instr::App1(v, e) => {
                let a = self.fresh();
                let f = Ty::Arrow(Box::new(a.clone()), Box::new(t.clone()));
                self.expr(gamma, v, &f) && self.expr(gamma, e, &a)
            }
        }
    }

    /// `|-K k : t1 -> t2`.
    fn cont(&mut self, gamma: &mut Vec<Ty>, k: &Cont, t1: &Ty, t2: &Ty) -> bool {
        match k {
            Cont::Init => self.unify(t1, t2),
            Cont::Push(rest, fr) => {
                let mid = self.fresh();
                let ok = self.under(gamma, fr, t1.clone(), |tc, g, body| match Instr::from_expr(body) {
                    Some(i) => tc.instr(g, &i, &mid),
                    None => false,
                });
                ok && self.cont(gamma, rest, &mid, t2)
            }
        }
    }

    fn state(&mut self, gamma: &mut Vec<Ty>, s: &MachineState, t: &Ty) -> bool {
        match s {
            MachineState::Answer(v) => self.expr(gamma, v, t),
            MachineState::Run(k, i) => {
                let t1 = self.fresh();
                self.instr(gamma, i, &t1) && self.cont(gamma, k, &t1, t)
            }
        }
    }
}

/// Checks `subject` against the candidate type `t` under `gamma`, where
/// `gamma[k]` is the type of `VAR k`. For a continuation `t` must be an
/// arrow `t1 -> t2`.
pub fn direct_typecheck(gamma: &[Tp], subject: Subject<'_>, t: &Tp) -> bool {
    let mut tc = Tc::default();
    let mut g: Vec<Ty> = gamma.iter().map(Ty::of).collect();
    let t = Ty::of(t);
    match subject {
        Subject::Expr(e) => tc.expr(&mut g, e, &t),
        Subject::Instr(i) => tc.instr(&mut g, i, &t),
        Subject::Cont(k) => match &t {
            Ty::Arrow(a, b) => tc.cont(&mut g, k, a, b),
            _ => false,
        },
        Subject::State(s) => tc.state(&mut g, s, &t),
    }
}

/// Outcome of one machine subject-reduction instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CmSrOutcome {
    /// Every state of the run has type `t`, and the prover's value too.
    Preserved {
        value: Expr,
        steps: usize,
    },
    Violated(String),
    Inconclusive(String),
    Precondition(String),
}

impl CmSrOutcome {
    pub fn is_conclusive(&self) -> bool {
        matches!(self, CmSrOutcome::Preserved { .. } | CmSrOutcome::Violated(_))
    }
}

/// Proves `ceval(e, V)` and returns the value (if the search finds one).
pub fn olli_ceval(db: &DbOlli, e: &Expr, bound: u32, max_steps: u64) -> Result<SearchResult<Expr>, Error> {
    let mut store = MetaStore::new();
    let v = store.fresh_meta(0);
    let q = QueryOlli::Goal(Goal::At(ceval(e.into(), UTerm::Meta(v))));
    let cfg = SearchConfig::dfs(bound).steps(max_steps);
    Ok(match solutions_olli(db, &[], &[], &q, &store, &cfg)?.first() {
        SearchResult::Proved(s) => {
            let w = s.store.ground(&UTerm::Meta(MetaId { id: v.id, arity: 0 }), &db.default);
            SearchResult::Proved(Box::new(crate::search::Solution {
                derivation: w,
                store: s.store,
            }))
        }
        SearchResult::Failed => SearchResult::Failed,
        SearchResult::Exhausted => SearchResult::Exhausted,
    })
}

/// Per-step type preservation along the machine run of `e : t`, and the
/// prover's value checked at `t`.
pub fn sr_check_instance_cm(
    db: &DbOlli,
    e: &Expr,
    t: &Tp,
    bound: u32,
    fuel: u64,
    max_steps: u64,
) -> Result<CmSrOutcome, Error> {
    if !proper(e) || e.max_var().is_some() {
        return Ok(CmSrOutcome::Precondition("term is not closed".into()));
    }
    if !direct_typecheck(&[], Subject::Expr(e), t) {
        return Ok(CmSrOutcome::Precondition(format!("term does not have type {t}")));
    }
    let (states, done) = machine_trace(e, fuel)?;
    for (k, s) in states.iter().enumerate() {
        if !direct_typecheck(&[], Subject::State(s), t) {
            return Ok(CmSrOutcome::Violated(format!("state {k} is not of type {t}: {s}")));
        }
    }
    let last = states.last().unwrap();
    let mv = match (done, last) {
        (true, MachineState::Answer(v)) => v.clone(),
        (true, _) => return Ok(CmSrOutcome::Violated(format!("well-typed machine is stuck at {last}"))),
        (false, _) => return Ok(CmSrOutcome::Inconclusive("no answer within fuel".into())),
    };
    let value = match olli_ceval(db, e, bound, max_steps)? {
        SearchResult::Proved(s) => s.derivation,
        SearchResult::Failed => return Ok(CmSrOutcome::Violated("prover finds no value".into())),
        SearchResult::Exhausted => return Ok(CmSrOutcome::Inconclusive("ceval search cut short".into())),
    };
    if value != mv {
        return Ok(CmSrOutcome::Violated("prover and machine disagree on the value".into()));
    }
    let q = QueryOlli::IList(vec![Goal::At(of((&value).into(), t.to_uterm()))]);
    let cfg = SearchConfig::dfs(bound).steps(max_steps);
    match solutions_olli(db, &[], &[], &q, &MetaStore::new(), &cfg)?.first() {
        SearchResult::Proved(_) => Ok(CmSrOutcome::Preserved {
            value,
            steps: states.len() - 1,
        }),
        SearchResult::Failed => Ok(CmSrOutcome::Violated(format!("value is not of type {t}"))),
        SearchResult::Exhausted => Ok(CmSrOutcome::Inconclusive("value typing cut short".into())),
    }
}

/// The first type the ordered program gives `e` (unconstrained parts
/// read as `i`).
pub fn olli_type(db: &DbOlli, e: &Expr, bound: u32, max_steps: u64) -> Result<SearchResult<Tp>, Error> {
    let mut store = MetaStore::new();
    let t = store.fresh_meta(0);
    let q = QueryOlli::IList(vec![Goal::At(of(e.into(), UTerm::Meta(t)))]);
    let cfg = SearchConfig::dfs(bound).steps(max_steps);
    Ok(match solutions_olli(db, &[], &[], &q, &store, &cfg)?.first() {
        SearchResult::Proved(s) => match Tp::from_expr(&s.store.ground(&UTerm::Meta(t), &db.default)) {
            Some(tp) => SearchResult::Proved(Box::new(crate::search::Solution {
                derivation: tp,
                store: s.store,
            })),
            None => SearchResult::Failed,
        },
        SearchResult::Failed => SearchResult::Failed,
        SearchResult::Exhausted => SearchResult::Exhausted,
    })
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::miniml::parse;
    use crate::sl_olli::{check_olli, prove_olli};

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn ii() -> Tp {
        Tp::arrow(Tp::Base, Tp::Base)
    }

    #[test]
    fn step_rules() {
        let v = p("fun x. x");
        let s = MachineState::Run(Cont::Init, Instr::Return(v.clone()));
        assert_eq!(machine_step(&s), Some(MachineState::Answer(v.clone())));
        assert_eq!(machine_step(&MachineState::Answer(v.clone())), None);
        let (e1, e2) = (p("fun x. x"), p("fun y. y"));
        let s = MachineState::Run(Cont::Init, Instr::Ev(miniml::app(e1.clone(), e2.clone())));
        let frame = Abstraction::from_body(Instr::App1(Expr::bnd(0), e2).to_expr());
        assert_eq!(
            machine_step(&s),
            Some(MachineState::Run(Cont::Push(Rc::new(Cont::Init), frame), Instr::Ev(e1)))
        );
        assert_eq!(
            machine_step(&MachineState::Run(Cont::Init, Instr::Ev(Expr::var(0)))),
            None
        );
    }

    #[test]
    fn run_examples() {
        assert_eq!(machine_run(&p("fun x. x"), 10).unwrap(), Some(p("fun x. x")));
        let e = p("(fun x. fun y. x) @ ((fun z. z) @ (fun w. w))");
        assert_eq!(machine_run(&e, 100).unwrap(), Some(p("fun y. (fun z. z) @ (fun w. w)")));
        assert_eq!(machine_run(&p("fix x. x"), 100).unwrap(), None);
    }

    #[test]
    fn fifteen_clauses() {
        let db = db_contmach();
        assert_eq!(db.clauses.len(), 15);
        let ce = &db.clauses[8];
        assert_eq!(ce.name, "ceval");
        assert!(ce.intuit.is_empty());
        assert_eq!(
            ce.ordered,
            vec![Goal::ord_imp(init(tmpl::v(1)), Goal::At(exec(ev(tmpl::v(0)))))]
        );
        let ea = &db.clauses[13];
        assert_eq!(ea.name, "exec_app");
        let Goal::OrdImp(a, g) = &ea.ordered[0] else { panic!() };
        assert_eq!(a.pred, "cont");
        assert!(matches!(&**g, Goal::At(x) if x.pred == "exec"));
    }

    #[test]
    fn typecheck_examples() {
        let t = Tp::arrow(Tp::Base, Tp::Base);
        assert!(direct_typecheck(
            &[],
            Subject::Cont(&Cont::Init),
            &Tp::arrow(t.clone(), t.clone())
        ));
        let s = MachineState::Run(Cont::Init, Instr::Return(p("fun x. x")));
        assert!(direct_typecheck(&[], Subject::State(&s), &t));
        assert!(!direct_typecheck(&[], Subject::Expr(&Expr::var(0)), &Tp::Base));
        assert!(direct_typecheck(&[Tp::Base], Subject::Expr(&Expr::var(0)), &Tp::Base));
        assert!(!direct_typecheck(&[], Subject::Expr(&p("fun x. x @ x")), &ii()));
    }

    #[test]
    fn identity_value() {
        let db = db_contmach();
        let mut s = MetaStore::new();
        let v = s.fresh_meta(0);
        let g = Goal::At(ceval((&p("fun x. x")).into(), UTerm::Meta(v)));
        let r = prove_olli(&db, &[], &[], 20, &g, &s).unwrap();
        let sol = r.solution().unwrap();
        assert_eq!(sol.store.ground(&UTerm::Meta(v), &db.default), p("fun x. x"));
        assert!(check_olli(&db, &sol.derivation).is_ok());
    }

    #[test]
    fn cm_sr_examples() {
        let db = db_contmach();
        let r = sr_check_instance_cm(&db, &p("fun x. x"), &ii(), 40, 100, 100_000).unwrap();
        assert!(matches!(r, CmSrOutcome::Preserved { .. }), "{r:?}");
        let t = Tp::arrow(ii(), ii());
        let r = sr_check_instance_cm(&db, &p("fun x. fun y. x @ y"), &t, 40, 100, 100_000).unwrap();
        assert!(matches!(r, CmSrOutcome::Preserved { .. }), "{r:?}");
        let r = sr_check_instance_cm(&db, &p("fun x. x @ x"), &ii(), 40, 100, 100_000).unwrap();
        assert!(matches!(r, CmSrOutcome::Precondition(_)));
    }

    #[test]
    fn olli_type_of_apply() {
        let db = db_contmach();
        let r = olli_type(&db, &p("fun x. fun y. x @ y"), 12, 100_000).unwrap();
        assert_eq!(r.solution().unwrap().derivation, Tp::arrow(ii(), ii()));
    }
}
