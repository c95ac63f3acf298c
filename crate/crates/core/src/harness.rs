//! Seeded property suites over the provers and object logics.
//!
//! Every suite returns a [`Report`]. A case is inconclusive when a search
//! ran out of bound or steps, or an evaluator ran out of fuel; such cases
//! are counted apart and never as failures.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contmach::{self, machine_trace, olli_type, sr_check_instance_cm, CmSrOutcome, MachineState};
use crate::error::Error;
use crate::formula::{Atom, Goal};
use crate::miniml::{self, meta_eval, sr_check_instance, EvalOutcome, SrConfig, SrOutcome, Tp};
use crate::search::{SearchConfig, SearchResult};
use crate::sl_hh::{check_hh, solutions_hh, DbHH, DerivationHH, RuleHH, SequentHH};
use crate::sl_olli::{check_olli, solutions_olli, DbOlli, DerivationOlli, QueryOlli, RuleOlli, SequentOlli};
use crate::surface::{subst_named, NamedTerm, OLSignature, VarContext};
use crate::syntax::{abstract_var, instantiate, lambda, level, proper, Abstraction, ConstId, Expr, NameHint};
use crate::unify::{MetaStore, UTerm};

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub suite: String,
    pub run: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    /// Inputs outside the suite's precondition (for example untypeable terms).
    pub skipped: usize,
    pub diagnostics: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report {
            suite: suite.into(),
            ..Default::default()
        }
    }

    pub fn pass(&mut self) {
        self.run += 1;
        self.passed += 1;
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.run += 1;
        self.failed += 1;
        self.diagnostics.push(format!("FAIL {}", msg.into()));
    }

    pub fn inconclusive(&mut self, msg: impl Into<String>) {
        self.run += 1;
        self.inconclusive += 1;
        self.diagnostics.push(format!("INCONCLUSIVE {}", msg.into()));
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(msg())
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn timed(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }
}

impl Report {
    /// The counts without the wall-clock time.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} run, {} passed, {} failed, {} inconclusive",
            self.suite, self.run, self.passed, self.failed, self.inconclusive
        );
        if self.skipped > 0 {
            s.push_str(&format!(", {} skipped", self.skipped));
        }
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:.2?})", self.summary(), self.elapsed)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const CA: ConstId = ConstId::new("gen", "a");
const CB: ConstId = ConstId::new("gen", "b");

/// A small random term; `Bnd j` only for `j <= depth`, so the result is
/// an abstraction body (`level 1`).
fn gen_body(r: &mut ChaCha8Rng, depth: u32, size: u32) -> Expr {
    if size <= 1 {
        return match r.gen_range(0..4) {
            0 => Expr::con(CA),
            1 => Expr::con(CB),
            2 => Expr::var(r.gen_range(0..2)),
            _ => Expr::bnd(r.gen_range(0..=depth)),
        };
    }
    if r.gen_bool(0.4) {
        let hint = match r.gen_range(0..3) {
            0 => NameHint::none(),
            1 => NameHint::named("x"),
            _ => NameHint::named("y"),
        };
        Expr::abs_named(gen_body(r, depth + 1, size - 1), hint)
    } else {
        let k = r.gen_range(1..size);
        Expr::app(gen_body(r, depth, k), gen_body(r, depth, size - k))
    }
}

/// Same tree with every binder name replaced.
fn rehint(e: &Expr, name: &str) -> Expr {
    match e {
        Expr::App(l, r) => Expr::app(rehint(l, name), rehint(r, name)),
        Expr::Abs(b, _) => Expr::abs_named(rehint(b, name), NameHint::named(name)),
        _ => e.clone(),
    }
}

/// `lambda a = lambda b` exactly when the bodies are equal.
pub fn abstraction_suite(seed: u64, samples: usize) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("abstraction");
    let mut r = rng(seed);
    for case in 0..samples {
        let size = r.gen_range(1..=5);
        let b1 = gen_body(&mut r, 0, size);
        let b2 = match r.gen_range(0..3) {
            0 => rehint(&b1, "renamed"),
            _ => {
                let n = r.gen_range(1..=5);
                gen_body(&mut r, 0, n)
            }
        };
        let (a1, a2) = (Abstraction::from_body(b1.clone()), Abstraction::from_body(b2.clone()));
        if !level(1, &b1) || !level(1, &b2) {
            rep.fail(format!("case {case}: generator produced a non-abstraction"));
            continue;
        }
        let lam_eq = lambda(&a1) == lambda(&a2);
        let body_eq = b1 == b2;
        rep.check(lam_eq == body_eq, || format!("case {case}: {b1:?} vs {b2:?}"));
    }
    rep.timed(start)
}

const NAMES: [&str; 5] = ["x", "y", "z", "f", "g"];

/// A random Mini-ML named term whose free names come from `scope`.
fn gen_named(r: &mut ChaCha8Rng, scope: &mut Vec<String>, size: u32) -> NamedTerm {
    if size <= 1 && !scope.is_empty() {
        return NamedTerm::var(&scope[r.gen_range(0..scope.len())]);
    }
    let choice = if scope.is_empty() {
        r.gen_range(0..2)
    } else {
        r.gen_range(0..5)
    };
    match choice {
        0 | 1 => {
            let x = NAMES[r.gen_range(0..NAMES.len())];
            let op = if choice == 0 { miniml::ABS } else { miniml::FIX };
            scope.push(x.to_string());
            let body = gen_named(r, scope, size.saturating_sub(1));
            scope.pop();
            NamedTerm::binder(Some(op), x, body)
        }
        2 => NamedTerm::var(&scope[r.gen_range(0..scope.len())]),
        _ => {
            let k = r.gen_range(1..size.max(2));
            let l = gen_named(r, scope, k);
            let rr = gen_named(r, scope, size.saturating_sub(k).max(1));
            NamedTerm::app2(Some(miniml::APP), l, rr)
        }
    }
}

/// Alpha-equivalence by walking both terms with binder environments.
pub fn alpha_equiv(a: &NamedTerm, b: &NamedTerm) -> bool {
    fn go(a: &NamedTerm, b: &NamedTerm, ea: &mut Vec<String>, eb: &mut Vec<String>) -> bool {
        match (a, b) {
            (NamedTerm::Var(x), NamedTerm::Var(y)) => {
                let i = ea.iter().rposition(|n| n == x);
                let j = eb.iter().rposition(|n| n == y);
                match (i, j) {
                    (Some(i), Some(j)) => ea.len() - i == eb.len() - j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (NamedTerm::Const(c), NamedTerm::Const(d)) => c == d,
            (
                NamedTerm::Binder {
                    op: o1,
                    bound: x,
                    body: b1,
                },
                NamedTerm::Binder {
                    op: o2,
                    bound: y,
                    body: b2,
                },
            ) => {
                if o1 != o2 {
                    return false;
                }
                ea.push(x.clone());
                eb.push(y.clone());
                let ok = go(b1, b2, ea, eb);
                ea.pop();
                eb.pop();
                ok
            }
            (
                NamedTerm::App2 {
                    op: o1,
                    left: l1,
                    right: r1,
                },
                NamedTerm::App2 {
                    op: o2,
                    left: l2,
                    right: r2,
                },
            ) => o1 == o2 && go(l1, l2, ea, eb) && go(r1, r2, ea, eb),
            _ => false,
        }
    }
    go(a, b, &mut vec![], &mut vec![])
}

/// Encode/decode round trips, and substitution on names against
/// `instantiate` on encodings.
pub fn adequacy_suite(seed: u64, samples: usize) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("adequacy");
    let mut r = rng(seed);
    let sig = miniml::signature();
    for case in 0..samples {
        let open = case % 2 == 1;
        let names: Vec<String> = if open {
            vec!["a".into(), "b".into(), "c".into()]
        } else {
            vec![]
        };
        let ctx = VarContext::new(&names).expect("distinct names");
        let size = r.gen_range(1..=12);
        let t = gen_named(&mut r, &mut names.clone(), size);
        let e = match sig.encode(&ctx, &t) {
            Ok(e) => e,
            Err(err) => {
                rep.fail(format!("case {case}: encode failed: {err}"));
                continue;
            }
        };
        let Some(d) = sig.decode(&ctx, &e) else {
            rep.fail(format!("case {case}: decode of an encoding failed"));
            continue;
        };
        let ok = proper(&e)
            && alpha_equiv(&d, &t)
            && sig.encode(&ctx, &d).as_ref() == Ok(&e)
            && sig.decode(&ctx, &sig.encode(&ctx, &d).unwrap()).as_ref() == Some(&d);
        if !ok {
            rep.fail(format!("case {case}: round trip failed for {e:?}"));
            continue;
        }
        // compositionality: t over ctx + [w], s over ctx
        let mut ext = names.clone();
        ext.push("w".into());
        let ectx = VarContext::new(&ext).expect("distinct names");
        let t2 = gen_named(&mut r, &mut ext.clone(), size);
        let n = r.gen_range(1..=6);
        let s = gen_named(&mut r, &mut names.clone(), n);
        let lhs = sig.encode(&ctx, &subst_named(&t2, "w", &s));
        let rhs = sig
            .encode(&ectx, &t2)
            .and_then(|e2| instantiate(&abstract_var(&e2, names.len() as u32), &sig.encode(&ctx, &s)?));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => rep.pass(),
            (a, b) => rep.fail(format!("case {case}: substitution mismatch {a:?} vs {b:?}")),
        }
    }
    rep.timed(start)
}

/// Limits shared by the prover-backed suites.
#[derive(Clone, Debug)]
pub struct Limits {
    pub bound: u32,
    pub fuel: u64,
    pub max_steps: u64,
}

fn eval_goal(e: &Expr, store: &mut MetaStore) -> (Goal<UTerm>, UTerm) {
    let v = UTerm::Meta(store.fresh_meta(0));
    (Goal::At(miniml::eval(e.into(), v.clone())), v)
}

/// The reference evaluator and the prover agree on every corpus term.
/// Checked evaluation derivations are appended to `harvest`.
pub fn equivalence_suite(
    db: &DbHH,
    corpus: &[Expr],
    lim: &Limits,
    harvest: &mut Vec<DerivationHH>,
) -> Result<Report, Error> {
    let start = Instant::now();
    let mut rep = Report::new("equivalence");
    for (case, e) in corpus.iter().enumerate() {
        let meta = meta_eval(e, lim.fuel)?;
        let mut store = MetaStore::new();
        let (goal, v) = eval_goal(e, &mut store);
        let cfg = SearchConfig::dfs(lim.bound).steps(lim.max_steps);
        let sl = solutions_hh(db, &[], &goal, &store, &cfg)?.first();
        let shown = || miniml::show(e).unwrap_or_else(|| format!("{e:?}"));
        match (&meta, sl) {
            (EvalOutcome::Value(mv), SearchResult::Proved(s)) => {
                let w = s.store.ground(&v, &db.default);
                if let Err(f) = check_hh(db, &s.derivation) {
                    rep.fail(format!("case {case}: derivation rejected: {f:?}"));
                } else {
                    rep.check(w == *mv, || {
                        format!("case {case}: {} evaluates to different values", shown())
                    });
                    harvest.push(s.derivation);
                }
            }
            (EvalOutcome::Value(_), SearchResult::Failed) => {
                rep.fail(format!("case {case}: prover fails on {}", shown()))
            }
            (EvalOutcome::Stuck, SearchResult::Proved(_)) => {
                rep.fail(format!("case {case}: prover evaluates stuck {}", shown()))
            }
            (EvalOutcome::Stuck, SearchResult::Failed) => rep.pass(),
            (EvalOutcome::OutOfFuel, _) => rep.inconclusive(format!("case {case}: no value within fuel")),
            (_, SearchResult::Exhausted) => rep.inconclusive(format!("case {case}: search cut short")),
        }
    }
    Ok(rep.timed(start))
}

/// Typing derivations (first type) for the typeable corpus terms.
pub fn harvest_hh_typing(db: &DbHH, corpus: &[Expr], lim: &Limits) -> Result<Vec<DerivationHH>, Error> {
    let mut out = vec![];
    for e in corpus {
        let mut store = MetaStore::new();
        let t = UTerm::Meta(store.fresh_meta(0));
        let goal = Goal::At(miniml::hastype(e.into(), t));
        let cfg = SearchConfig::dfs(lim.bound).steps(lim.max_steps);
        if let SearchResult::Proved(s) = solutions_hh(db, &[], &goal, &store, &cfg)?.first() {
            out.push(s.derivation);
        }
    }
    Ok(out)
}

fn lift_atoms(v: &[Atom<Expr>]) -> Vec<Atom<UTerm>> {
    v.iter().map(|a| a.lift()).collect()
}

fn hh_proves(
    db: &DbHH,
    ctx: &[Atom<Expr>],
    bound: u32,
    goal: &Goal<Expr>,
    steps: u64,
) -> Result<SearchResult<DerivationHH>, Error> {
    let cfg = SearchConfig::dfs(bound).steps(steps);
    let out = solutions_hh(db, &lift_atoms(ctx), &goal.lift(), &MetaStore::new(), &cfg)?.first();
    if let SearchResult::Proved(s) = &out {
        if check_hh(db, &s.derivation).is_err() {
            return Ok(SearchResult::Failed);
        }
    }
    Ok(out)
}

/// Distinct subderivations, as `(sequent, height, node)`, in a seeded order.
fn hh_nodes(derivs: &[DerivationHH], seed: u64) -> Vec<(SequentHH, u32, &DerivationHH)> {
    let mut seen = HashSet::new();
    let mut out = vec![];
    for d in derivs {
        d.walk(0, &mut |_, n| {
            if seen.insert(format!("{:?}", (&n.sequent.ctx, &n.sequent.goal))) {
                out.push((n.sequent.clone(), n.height(), n));
            }
        });
    }
    out.shuffle(&mut rng(seed));
    out
}

fn same_set(a: &[Atom<Expr>], b: &[Atom<Expr>]) -> bool {
    a.iter().all(|x| b.contains(x)) && b.iter().all(|x| a.contains(x))
}

/// Two ground atoms over the predicates of a database that are not in `ctx`.
fn injected(ctx: &[Atom<Expr>], pool: &[Atom<Expr>]) -> Vec<Atom<Expr>> {
    pool.iter().filter(|a| !ctx.contains(a)).take(2).cloned().collect()
}

fn hh_pool() -> Vec<Atom<Expr>> {
    let id = miniml::parse("fun q. q").unwrap();
    let ii = Tp::arrow(Tp::Base, Tp::Base).to_expr();
    vec![
        Atom::new("isterm", vec![Expr::var(900)]),
        Atom::new("hastype", vec![Expr::var(901), ii.clone()]),
        Atom::new("eval", vec![id.clone(), id.clone()]),
        Atom::new("hastype", vec![id, ii]),
    ]
}

/// Bound weakening, context weakening and atomic cut on harvested sequents.
pub fn structural_hh_suite(
    db: &DbHH,
    derivs: &[DerivationHH],
    seed: u64,
    samples: usize,
    steps: u64,
) -> Result<Report, Error> {
    let start = Instant::now();
    let mut rep = Report::new("structural-hh");
    let nodes = hh_nodes(derivs, seed);
    let pool = hh_pool();
    for (case, (s, h, _)) in nodes.iter().take(samples).enumerate() {
        let mut problems = vec![];
        let mut cut_short = false;
        for b in [h + 1, h + 5] {
            match hh_proves(db, &s.ctx, b, &s.goal, steps)? {
                SearchResult::Proved(_) => {}
                SearchResult::Failed => problems.push(format!("not provable at bound {b}")),
                SearchResult::Exhausted => cut_short = true,
            }
        }
        let mut wider = s.ctx.clone();
        wider.extend(injected(&s.ctx, &pool));
        match hh_proves(db, &wider, *h, &s.goal, steps)? {
            SearchResult::Proved(_) => {}
            SearchResult::Failed => problems.push("not provable under a larger context".into()),
            SearchResult::Exhausted => cut_short = true,
        }
        // cut: an atom proved by backchaining under the same context
        let partner = nodes.iter().find(|(a, _, n)| {
            matches!(n.rule, RuleHH::Bc { .. })
                && matches!(a.goal, Goal::At(_))
                && same_set(&a.ctx, &s.ctx)
                && a.goal != s.goal
        });
        if let Some((a, j, _)) = partner {
            let Goal::At(atom) = &a.goal else { unreachable!() };
            let mut with_a = s.ctx.clone();
            with_a.push(atom.clone());
            let mut i = None;
            for b in 0..=*h {
                if let SearchResult::Proved(_) = hh_proves(db, &with_a, b, &s.goal, steps)? {
                    i = Some(b);
                    break;
                }
            }
            match i {
                None => problems.push("goal not provable with the cut atom added".into()),
                Some(i) => match hh_proves(db, &s.ctx, i + j, &s.goal, steps)? {
                    SearchResult::Proved(_) => {}
                    SearchResult::Failed => problems.push(format!("cut: not provable at {i}+{j}")),
                    SearchResult::Exhausted => cut_short = true,
                },
            }
        }
        if !problems.is_empty() {
            rep.fail(format!(
                "case {case}: {}: {}",
                crate::sl_hh::show_sequent(s),
                problems.join("; ")
            ));
        } else if cut_short {
            rep.inconclusive(format!("case {case}: search cut short"));
        } else {
            rep.pass();
        }
    }
    Ok(rep.timed(start))
}

/// Types of each typeable term carry over to its value.
pub fn sr_miniml_suite(db: &DbHH, corpus: &[Expr], cfg: &SrConfig) -> Result<Report, Error> {
    let start = Instant::now();
    let mut rep = Report::new("sr-miniml");
    for (case, e) in corpus.iter().enumerate() {
        match sr_check_instance(db, e, cfg)? {
            SrOutcome::Preserved { .. } => rep.pass(),
            SrOutcome::Violated(m) => rep.fail(format!("case {case}: {m}")),
            SrOutcome::Inconclusive(m) => rep.inconclusive(format!("case {case}: {m}")),
            SrOutcome::Precondition(_) => rep.skip(),
        }
    }
    Ok(rep.timed(start))
}

/// The machine and the ordered program compute the same answers.
/// Checked `ceval` derivations are appended to `harvest`.
pub fn correspondence_suite(
    db: &DbOlli,
    corpus: &[Expr],
    lim: &Limits,
    harvest: &mut Vec<DerivationOlli>,
) -> Result<Report, Error> {
    let start = Instant::now();
    let mut rep = Report::new("machine-correspondence");
    for (case, e) in corpus.iter().enumerate() {
        let (states, done) = machine_trace(e, lim.fuel)?;
        let machine = match (done, states.last().unwrap()) {
            (true, MachineState::Answer(v)) => Some(Some(v.clone())),
            (true, _) => Some(None),
            (false, _) => None,
        };
        let mut store = MetaStore::new();
        let v = UTerm::Meta(store.fresh_meta(0));
        let q = QueryOlli::Goal(Goal::At(contmach::ceval(e.into(), v.clone())));
        let cfg = SearchConfig::dfs(lim.bound).steps(lim.max_steps);
        let sl = solutions_olli(db, &[], &[], &q, &store, &cfg)?.first();
        match (machine, sl) {
            (Some(Some(mv)), SearchResult::Proved(s)) => {
                if let Err(f) = check_olli(db, &s.derivation) {
                    rep.fail(format!("case {case}: derivation rejected: {f:?}"));
                } else {
                    let w = s.store.ground(&v, &db.default);
                    rep.check(w == mv, || format!("case {case}: machine and prover disagree"));
                    harvest.push(s.derivation);
                }
            }
            (Some(Some(_)), SearchResult::Failed) => {
                rep.fail(format!("case {case}: prover fails where the machine answers"))
            }
            (Some(None), SearchResult::Proved(_)) => rep.fail(format!("case {case}: prover answers a stuck machine")),
            (Some(None), SearchResult::Failed) => rep.pass(),
            (None, _) => rep.inconclusive(format!("case {case}: no answer within fuel")),
            (_, SearchResult::Exhausted) => rep.inconclusive(format!("case {case}: search cut short")),
        }
    }
    Ok(rep.timed(start))
}

/// Typing derivations (`of`, first type) from the ordered program.
pub fn harvest_olli_typing(db: &DbOlli, corpus: &[Expr], lim: &Limits) -> Result<Vec<DerivationOlli>, Error> {
    let mut out = vec![];
    for e in corpus {
        let mut store = MetaStore::new();
        let t = UTerm::Meta(store.fresh_meta(0));
        let q = QueryOlli::Goal(Goal::At(contmach::of(e.into(), t)));
        let cfg = SearchConfig::dfs(lim.bound).steps(lim.max_steps);
        if let SearchResult::Proved(s) = solutions_olli(db, &[], &[], &q, &store, &cfg)?.first() {
            out.push(s.derivation);
        }
    }
    Ok(out)
}

/// Per-step state typing along the machine run, and the value's type.
pub fn sr_contmach_suite(db: &DbOlli, corpus: &[Expr], lim: &Limits) -> Result<Report, Error> {
    let start = Instant::now();
    let mut rep = Report::new("sr-contmach");
    for (case, e) in corpus.iter().enumerate() {
        let t = match olli_type(db, e, lim.bound, lim.max_steps)? {
            SearchResult::Proved(s) => s.derivation,
            SearchResult::Failed => {
                rep.skip();
                continue;
            }
            SearchResult::Exhausted => {
                rep.inconclusive(format!("case {case}: type search cut short"));
                continue;
            }
        };
        match sr_check_instance_cm(db, e, &t, lim.bound, lim.fuel, lim.max_steps)? {
            CmSrOutcome::Preserved { .. } => rep.pass(),
            CmSrOutcome::Violated(m) => rep.fail(format!("case {case}: {m}")),
            CmSrOutcome::Inconclusive(m) => rep.inconclusive(format!("case {case}: {m}")),
            CmSrOutcome::Precondition(m) => rep.fail(format!(
                "case {case}: prover type {t} rejected by the direct checker: {m}"
            )),
        }
    }
    Ok(rep.timed(start))
}

fn olli_proves(
    db: &DbOlli,
    gamma: &[Atom<Expr>],
    omega: &[Atom<Expr>],
    bound: u32,
    goal: &Goal<Expr>,
    steps: u64,
) -> Result<SearchResult<DerivationOlli>, Error> {
    let cfg = SearchConfig::dfs(bound).steps(steps);
    let q = QueryOlli::Goal(goal.lift());
    let out = solutions_olli(db, &lift_atoms(gamma), &lift_atoms(omega), &q, &MetaStore::new(), &cfg)?.first();
    if let SearchResult::Proved(s) = &out {
        if check_olli(db, &s.derivation).is_err() {
            return Ok(SearchResult::Failed);
        }
    }
    Ok(out)
}

struct OlliGoalNode<'a> {
    gamma: &'a [Atom<Expr>],
    omega: &'a [Atom<Expr>],
    goal: &'a Goal<Expr>,
    height: u32,
    bc: bool,
}

fn olli_nodes(derivs: &[DerivationOlli], seed: u64) -> Vec<OlliGoalNode<'_>> {
    let mut seen = HashSet::new();
    let mut out = vec![];
    for d in derivs {
        d.walk(0, &mut |_, n| {
            if let SequentOlli::Goal { gamma, omega, goal, .. } = &n.sequent {
                if seen.insert(format!("{:?}", (gamma, omega, goal))) {
                    out.push(OlliGoalNode {
                        gamma,
                        omega,
                        goal,
                        height: n.height(),
                        bc: matches!(n.rule, RuleOlli::Bc { .. }),
                    });
                }
            }
        });
    }
    out.shuffle(&mut rng(seed));
    out
}

fn olli_pool() -> Vec<Atom<Expr>> {
    let id = miniml::parse("fun q. q").unwrap();
    let ii = Tp::arrow(Tp::Base, Tp::Base).to_expr();
    vec![
        Atom::new("of", vec![Expr::var(900), ii.clone()]),
        Atom::new("of", vec![id.clone(), ii.clone()]),
        Atom::new("ofK", vec![Tp::arrow(Tp::Base, Tp::Base).to_expr()]),
        Atom::new("ceval", vec![id.clone(), id]),
    ]
}

/// Bound weakening, weakening of the intuitionistic context and
/// intuitionistic atomic cut on harvested ordered sequents.
pub fn structural_olli_suite(
    db: &DbOlli,
    derivs: &[DerivationOlli],
    seed: u64,
    samples: usize,
    steps: u64,
) -> Result<Report, Error> {
    let start = Instant::now();
    let mut rep = Report::new("structural-olli");
    let nodes = olli_nodes(derivs, seed);
    let pool = olli_pool();
    for (case, s) in nodes.iter().take(samples).enumerate() {
        let mut problems = vec![];
        let mut cut_short = false;
        let mut expect = |r: SearchResult<DerivationOlli>, what: String, problems: &mut Vec<String>| match r {
            SearchResult::Proved(_) => {}
            SearchResult::Failed => problems.push(what),
            SearchResult::Exhausted => cut_short = true,
        };
        for b in [s.height + 1, s.height + 5] {
            let r = olli_proves(db, s.gamma, s.omega, b, s.goal, steps)?;
            expect(r, format!("not provable at bound {b}"), &mut problems);
        }
        let mut wider = injected(s.gamma, &pool);
        wider.extend(s.gamma.iter().cloned());
        let r = olli_proves(db, &wider, s.omega, s.height, s.goal, steps)?;
        expect(
            r,
            "not provable under a larger intuitionistic context".into(),
            &mut problems,
        );
        let partner = nodes.iter().find(|a| {
            a.bc && a.omega.is_empty()
                && matches!(a.goal, Goal::At(_))
                && same_set(a.gamma, s.gamma)
                && a.goal != s.goal
        });
        if let Some(a) = partner {
            let Goal::At(atom) = a.goal else { unreachable!() };
            let mut with_a = vec![atom.clone()];
            with_a.extend(s.gamma.iter().cloned());
            let mut i = None;
            for b in 0..=s.height {
                if let SearchResult::Proved(_) = olli_proves(db, &with_a, s.omega, b, s.goal, steps)? {
                    i = Some(b);
                    break;
                }
            }
            match i {
                None => problems.push("goal not provable with the cut atom added".into()),
                Some(i) => {
                    let r = olli_proves(db, s.gamma, s.omega, i + a.height, s.goal, steps)?;
                    expect(r, format!("cut: not provable at {i}+{}", a.height), &mut problems);
                }
            }
        }
        if !problems.is_empty() {
            rep.fail(format!("case {case}: {}", problems.join("; ")));
        } else if cut_short {
            rep.inconclusive(format!("case {case}: search cut short"));
        } else {
            rep.pass();
        }
    }
    Ok(rep.timed(start))
}

fn node_hh<'a>(d: &'a mut DerivationHH, path: &[usize]) -> &'a mut DerivationHH {
    path.iter().fold(d, |n, &i| &mut n.premises[i])
}

fn node_olli<'a>(d: &'a mut DerivationOlli, path: &[usize]) -> &'a mut DerivationOlli {
    path.iter().fold(d, |n, &i| &mut n.premises[i])
}

fn paths<D>(d: &D, kids: fn(&D) -> &[D]) -> Vec<Vec<usize>> {
    fn go<D>(d: &D, kids: fn(&D) -> &[D], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for (i, k) in kids(d).iter().enumerate() {
            cur.push(i);
            go(k, kids, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(d, kids, &mut vec![], &mut out);
    out
}

fn other_rule_hh(r: &RuleHH, pick: usize, clauses: usize) -> RuleHH {
    let alts = [
        RuleHH::Tt,
        RuleHH::And,
        RuleHH::Imp,
        RuleHH::Init,
        match r {
            RuleHH::All { eigen } => RuleHH::All { eigen: eigen + 1 },
            _ => RuleHH::All { eigen: 0 },
        },
        match r {
            RuleHH::Bc { clause, inst } => RuleHH::Bc {
                clause: (clause + 1) % clauses,
                inst: inst.clone(),
            },
            _ => RuleHH::Bc {
                clause: 0,
                inst: vec![],
            },
        },
    ];
    let alts: Vec<RuleHH> = alts.into_iter().filter(|a| a != r).collect();
    alts[pick % alts.len()].clone()
}

fn other_rule_olli(r: &RuleOlli, pick: usize, clauses: usize) -> RuleOlli {
    let alts = [
        RuleOlli::Tt,
        RuleOlli::InitOmega,
        RuleOlli::InitGamma,
        RuleOlli::Imp,
        RuleOlli::OrdImp,
        RuleOlli::And,
        RuleOlli::OListNil,
        RuleOlli::IListNil,
        RuleOlli::IListCons,
        match r {
            RuleOlli::All { eigen } => RuleOlli::All { eigen: eigen + 1 },
            _ => RuleOlli::All { eigen: 0 },
        },
        match r {
            RuleOlli::Bc { clause, inst } => RuleOlli::Bc {
                clause: (clause + 1) % clauses,
                inst: inst.clone(),
            },
            _ => RuleOlli::Bc {
                clause: 0,
                inst: vec![],
            },
        },
        match r {
            RuleOlli::OListCons { split } => RuleOlli::OListCons { split: split + 1 },
            _ => RuleOlli::OListCons { split: 0 },
        },
    ];
    let alts: Vec<RuleOlli> = alts.into_iter().filter(|a| a != r).collect();
    alts[pick % alts.len()].clone()
}

/// A fresh atom for the mutation of a context.
fn stray_atom(k: u32) -> Atom<Expr> {
    Atom::new("isterm", vec![Expr::var(5000 + k)])
}

/// Every emitted derivation checks, and random single-node mutations of
/// them (rule tag, bound, split, context atom) are rejected.
pub fn checker_suite(
    hh: (&DbHH, &[DerivationHH]),
    olli: (&DbOlli, &[DerivationOlli]),
    seed: u64,
    mutations: usize,
) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("checker");
    for (i, d) in hh.1.iter().enumerate() {
        if let Err(f) = check_hh(hh.0, d) {
            rep.fail(format!("hh derivation {i} rejected: {f:?}"));
        }
    }
    for (i, d) in olli.1.iter().enumerate() {
        if let Err(f) = check_olli(olli.0, d) {
            rep.fail(format!("olli derivation {i} rejected: {f:?}"));
        }
    }
    let mut r = rng(seed);
    let mut made = 0;
    while made < mutations {
        let kind = r.gen_range(0..4);
        let use_olli = kind == 2 || (r.gen_bool(0.5) && !olli.1.is_empty()) || hh.1.is_empty();
        if use_olli {
            if olli.1.is_empty() {
                break;
            }
            let orig = &olli.1[r.gen_range(0..olli.1.len())];
            let mut d = orig.clone();
            let ps = paths(&d, |n| &n.premises);
            let splits: Vec<&Vec<usize>> = ps
                .iter()
                .filter(|p| {
                    let mut n = orig;
                    for &i in p.iter() {
                        n = &n.premises[i];
                    }
                    matches!(n.rule, RuleOlli::OListCons { .. })
                })
                .collect();
            let non_root: Vec<&Vec<usize>> = ps.iter().filter(|p| !p.is_empty()).collect();
            let what;
            match kind {
                0 => {
                    let p = &ps[r.gen_range(0..ps.len())];
                    let n = node_olli(&mut d, p);
                    n.rule = other_rule_olli(&n.rule, r.gen_range(0..64), olli.0.clauses.len());
                    what = "rule tag";
                }
                1 if !non_root.is_empty() => {
                    let p = non_root[r.gen_range(0..non_root.len())];
                    let n = node_olli(&mut d, p);
                    let b = n.sequent.bound_mut();
                    *b = if *b > 0 && r.gen_bool(0.5) { *b - 1 } else { *b + 1 };
                    what = "bound";
                }
                2 if !splits.is_empty() => {
                    let p = splits[r.gen_range(0..splits.len())];
                    let n = node_olli(&mut d, p);
                    let RuleOlli::OListCons { split } = n.rule else {
                        unreachable!()
                    };
                    let len = n.sequent.omega().len();
                    let choices: Vec<usize> = (0..=len + 1).filter(|&k| k != split).collect();
                    n.rule = RuleOlli::OListCons {
                        split: choices[r.gen_range(0..choices.len())],
                    };
                    what = "split";
                }
                3 if !non_root.is_empty() => {
                    let p = non_root[r.gen_range(0..non_root.len())];
                    let n = node_olli(&mut d, p);
                    let g = n.sequent.gamma_mut();
                    if !g.is_empty() && r.gen_bool(0.5) {
                        let i = r.gen_range(0..g.len());
                        g.remove(i);
                    } else {
                        g.push(stray_atom(made as u32));
                    }
                    what = "context atom";
                }
                _ => continue,
            }
            if d == *orig {
                continue;
            }
            made += 1;
            rep.check(check_olli(olli.0, &d).is_err(), || {
                format!("olli {what} mutation accepted")
            });
        } else {
            let orig = &hh.1[r.gen_range(0..hh.1.len())];
            let mut d = orig.clone();
            let ps = paths(&d, |n| &n.premises);
            let non_root: Vec<&Vec<usize>> = ps.iter().filter(|p| !p.is_empty()).collect();
            let what;
            match kind {
                0 => {
                    let p = &ps[r.gen_range(0..ps.len())];
                    let n = node_hh(&mut d, p);
                    n.rule = other_rule_hh(&n.rule, r.gen_range(0..64), hh.0.clauses.len());
                    what = "rule tag";
                }
                1 if !non_root.is_empty() => {
                    let p = non_root[r.gen_range(0..non_root.len())];
                    let n = node_hh(&mut d, p);
                    let b = &mut n.sequent.bound;
                    *b = if *b > 0 && r.gen_bool(0.5) { *b - 1 } else { *b + 1 };
                    what = "bound";
                }
                3 if !non_root.is_empty() => {
                    let p = non_root[r.gen_range(0..non_root.len())];
                    let n = node_hh(&mut d, p);
                    let g = &mut n.sequent.ctx;
                    if !g.is_empty() && r.gen_bool(0.5) {
                        let i = r.gen_range(0..g.len());
                        g.remove(i);
                    } else {
                        g.push(stray_atom(made as u32));
                    }
                    what = "context atom";
                }
                _ => continue,
            }
            if d == *orig {
                continue;
            }
            made += 1;
            rep.check(check_hh(hh.0, &d).is_err(), || format!("hh {what} mutation accepted"));
        }
    }
    rep.timed(start)
}

/// Suite defaults.
pub fn default_limits() -> Limits {
    Limits {
        bound: 60,
        fuel: miniml::DEFAULT_FUEL,
        max_steps: 200_000,
    }
}

pub fn default_sr() -> SrConfig {
    SrConfig::default()
}

pub fn lambda_signature() -> OLSignature {
    OLSignature::lambda_calculus()
}
