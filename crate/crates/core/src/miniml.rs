//! Mini-ML: `fun`, `fix` and application over simple types `i` and `->`.
//!
//! Terms are encoded with three constants: `fun x. e` is
//! `APP(CON cABS, ABS e)`, `fix x. e` is `APP(CON cFIX, ABS e)` and
//! `e1 @ e2` is `APP(APP(CON cAPP, e1), e2)`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::formula::{Atom, Goal, VarDecl};
use crate::search::{SearchConfig, SearchResult};
use crate::sl_hh::{solutions_hh, ClauseHH, DbHH};
use crate::surface::{parse_term, Arity, OLSignature, SigEntry, VarContext};
use crate::syntax::{instantiate, proper, Abstraction, ConstId, Expr};
use crate::unify::{MetaId, MetaStore, UTerm};

pub const ABS: ConstId = ConstId::new("miniml", "cABS");
pub const APP: ConstId = ConstId::new("miniml", "cAPP");
pub const FIX: ConstId = ConstId::new("miniml", "cFIX");

pub const TP_I: ConstId = ConstId::new("tp", "i");
pub const TP_ARROW: ConstId = ConstId::new("tp", "arrow");

pub fn signature() -> OLSignature {
    OLSignature {
        ol: "miniml",
        entries: vec![
            SigEntry {
                c: ABS,
                arity: Arity::Binder,
                keyword: "fun",
            },
            SigEntry {
                c: FIX,
                arity: Arity::Binder,
                keyword: "fix",
            },
            SigEntry {
                c: APP,
                arity: Arity::Binary,
                keyword: "@",
            },
        ],
        native: false,
    }
}

/// Parses and encodes a closed term.
pub fn parse(src: &str) -> Result<Expr, Error> {
    signature().encode(&VarContext::empty(), &parse_term(&signature(), src)?)
}

/// Surface form of a term; free `VAR k` prints as `vk`.
pub fn show(e: &Expr) -> Option<String> {
    let sig = signature();
    let n = e.max_var().map_or(0, |m| m as usize + 1);
    let t = sig.decode_hinted(&VarContext::numbered("v", n), e)?;
    Some(crate::surface::Show { sig: &sig, term: &t }.to_string())
}

pub fn fun(body: Expr) -> Expr {
    Expr::app(Expr::con(ABS), Expr::abs(body))
}

pub fn fix(body: Expr) -> Expr {
    Expr::app(Expr::con(FIX), Expr::abs(body))
}

pub fn app(l: Expr, r: Expr) -> Expr {
    Expr::app(Expr::app(Expr::con(APP), l), r)
}

/// The abstraction under `fun`, if `e` is one.
pub fn as_fun(e: &Expr) -> Option<Abstraction> {
    as_binder(e, ABS)
}

pub fn as_fix(e: &Expr) -> Option<Abstraction> {
    as_binder(e, FIX)
}

fn as_binder(e: &Expr, c: ConstId) -> Option<Abstraction> {
    match e {
        Expr::App(f, a) => match (&**f, &**a) {
            (Expr::Con(k), Expr::Abs(b, _)) if *k == c => Some(Abstraction::from_body((**b).clone())),
            _ => None,
        },
        _ => None,
    }
}

pub fn as_app(e: &Expr) -> Option<(&Expr, &Expr)> {
    match e {
        Expr::App(f, r) => match &**f {
            Expr::App(g, l) if **g == Expr::Con(APP) => Some((l, r)),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tp {
    Base,
    Arrow(Box<Tp>, Box<Tp>),
}

impl Tp {
    pub fn arrow(a: Tp, b: Tp) -> Tp {
        Tp::Arrow(Box::new(a), Box::new(b))
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            Tp::Base => Expr::con(TP_I),
            Tp::Arrow(a, b) => Expr::app(Expr::app(Expr::con(TP_ARROW), a.to_expr()), b.to_expr()),
        }
    }

    pub fn to_uterm(&self) -> UTerm {
        (&self.to_expr()).into()
    }

    pub fn from_expr(e: &Expr) -> Option<Tp> {
        match e {
            Expr::Con(c) if *c == TP_I => Some(Tp::Base),
            Expr::App(f, b) => match &**f {
                Expr::App(g, a) if **g == Expr::Con(TP_ARROW) => Some(Tp::arrow(Tp::from_expr(a)?, Tp::from_expr(b)?)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Tp::Base => 1,
            Tp::Arrow(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Tp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tp::Base => f.write_str("i"),
            Tp::Arrow(a, b) => {
                if matches!(**a, Tp::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

pub fn isterm(e: UTerm) -> Atom<UTerm> {
    Atom::new("isterm", vec![e])
}

pub fn eval(e: UTerm, v: UTerm) -> Atom<UTerm> {
    Atom::new("eval", vec![e, v])
}

pub fn hastype(e: UTerm, t: UTerm) -> Atom<UTerm> {
    Atom::new("hastype", vec![e, t])
}

/// Builders for clause templates, where clause variable `i` is meta `i`.
pub(crate) mod tmpl {
    use super::*;

    pub fn v(i: u32) -> UTerm {
        UTerm::Meta(MetaId { id: i, arity: 0 })
    }

    /// `E x` for an arity-1 variable `E` and argument `x`.
    pub fn ap(i: u32, x: UTerm) -> UTerm {
        UTerm::mapp(MetaId { id: i, arity: 1 }, x)
    }

    pub fn con(c: ConstId) -> UTerm {
        UTerm::Con(c)
    }

    /// `op x. E x`
    pub fn binder(op: ConstId, e: u32) -> UTerm {
        UTerm::app(con(op), UTerm::abs(ap(e, UTerm::Bnd(0))))
    }

    pub fn fun(e: u32) -> UTerm {
        binder(ABS, e)
    }

    pub fn fix(e: u32) -> UTerm {
        binder(FIX, e)
    }

    pub fn app(l: UTerm, r: UTerm) -> UTerm {
        UTerm::app(UTerm::app(con(APP), l), r)
    }

    pub fn arrow(a: UTerm, b: UTerm) -> UTerm {
        UTerm::app(UTerm::app(con(TP_ARROW), a), b)
    }

    pub fn decls(vs: &[(&'static str, u8)]) -> Vec<VarDecl> {
        vs.iter().map(|&(name, arity)| VarDecl { name, arity }).collect()
    }

    /// The goal-level binder of an `all` directly around an atom.
    pub fn x() -> UTerm {
        UTerm::Bnd(0)
    }
}

/// Well-formedness, call-by-value evaluation and typing, in this order:
/// `is_app is_fun is_fix ev_app ev_fun ev_fix tp_app tp_fun tp_fix`.
pub fn db_miniml() -> DbHH {
    use tmpl::*;
    let at = Goal::At;
    let clauses = vec![
        ClauseHH {
            name: "is_app",
            vars: decls(&[("E1", 0), ("E2", 0)]),
            head: isterm(app(v(0), v(1))),
            body: Goal::and(at(isterm(v(0))), at(isterm(v(1)))),
        },
        ClauseHH {
            name: "is_fun",
            vars: decls(&[("E", 1)]),
            head: isterm(fun(0)),
            body: Goal::all(Goal::imp(isterm(x()), at(isterm(ap(0, x()))))),
        },
        ClauseHH {
            name: "is_fix",
            vars: decls(&[("E", 1)]),
            head: isterm(fix(0)),
            body: Goal::all(Goal::imp(isterm(x()), at(isterm(ap(0, x()))))),
        },
        ClauseHH {
            name: "ev_app",
            vars: decls(&[("E1", 0), ("E2", 0), ("E1'", 1), ("V2", 0), ("V", 0)]),
            head: eval(app(v(0), v(1)), v(4)),
            body: Goal::and(
                at(eval(v(0), fun(2))),
                Goal::and(at(eval(v(1), v(3))), at(eval(ap(2, v(3)), v(4)))),
            ),
        },
        ClauseHH {
            name: "ev_fun",
            vars: decls(&[("E", 1)]),
            head: eval(fun(0), fun(0)),
            body: at(isterm(fun(0))),
        },
        ClauseHH {
            name: "ev_fix",
            vars: decls(&[("E", 1), ("V", 0)]),
            head: eval(fix(0), v(1)),
            body: Goal::and(at(eval(ap(0, fix(0)), v(1))), at(isterm(fix(0)))),
        },
        ClauseHH {
            name: "tp_app",
            vars: decls(&[("E1", 0), ("E2", 0), ("T", 0), ("T'", 0)]),
            head: hastype(app(v(0), v(1)), v(2)),
            body: Goal::and(at(hastype(v(0), arrow(v(3), v(2)))), at(hastype(v(1), v(3)))),
        },
        ClauseHH {
            name: "tp_fun",
            vars: decls(&[("E", 1), ("T", 0), ("T'", 0)]),
            head: hastype(fun(0), arrow(v(1), v(2))),
            body: Goal::all(Goal::imp(hastype(x(), v(1)), at(hastype(ap(0, x()), v(2))))),
        },
        ClauseHH {
            name: "tp_fix",
            vars: decls(&[("E", 1), ("T", 0)]),
            head: hastype(fix(0), v(1)),
            body: Goal::all(Goal::imp(hastype(x(), v(1)), at(hastype(ap(0, x()), v(1))))),
        },
    ];
    DbHH::new(clauses, Expr::con(TP_I)).expect("built-in database is well formed")
}

/// Result of the reference evaluator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOutcome {
    Value(Expr),
    /// No rule applies (a free variable, or a non-function applied).
    Stuck,
    OutOfFuel,
}

impl EvalOutcome {
    pub fn value(self) -> Option<Expr> {
        match self {
            EvalOutcome::Value(v) => Some(v),
            _ => None,
        }
    }
}

pub const DEFAULT_FUEL: u64 = 10_000;

/// Big-step call-by-value evaluation, run on an explicit stack. Each
/// `ev` step costs one unit of fuel.
pub fn meta_eval(e: &Expr, fuel: u64) -> Result<EvalOutcome, Error> {
    if !proper(e) {
        return Err(Error::NonProper);
    }
    enum Frame {
        Arg(Expr),
        Body(Abstraction),
    }
    enum Mode {
        Eval(Expr),
        Ret(Expr),
    }
    let mut stack: Vec<Frame> = vec![];
    let mut mode = Mode::Eval(e.clone());
    let mut fuel = fuel;
    loop {
        mode = match mode {
            Mode::Eval(e) => {
                if fuel == 0 {
                    return Ok(EvalOutcome::OutOfFuel);
                }
                fuel -= 1;
                if as_fun(&e).is_some() {
                    Mode::Ret(e)
                } else if let Some(b) = as_fix(&e) {
                    Mode::Eval(instantiate(&b, &e)?)
                } else if let Some((l, r)) = as_app(&e) {
                    stack.push(Frame::Arg(r.clone()));
                    Mode::Eval(l.clone())
                } else {
                    return Ok(EvalOutcome::Stuck);
                }
            }
            Mode::Ret(v) => match stack.pop() {
                None => return Ok(EvalOutcome::Value(v)),
                Some(Frame::Arg(r)) => match as_fun(&v) {
                    Some(b) => {
                        stack.push(Frame::Body(b));
                        Mode::Eval(r)
                    }
                    None => return Ok(EvalOutcome::Stuck),
                },
                Some(Frame::Body(b)) => Mode::Eval(instantiate(&b, &v)?),
            },
        }
    }
}

/// A closed term, drawn deterministically from `seed`. Roughly half the
/// outputs are built to be well typed; the rest are only well scoped.
pub fn gen_closed_term(seed: u64, size_budget: usize) -> Expr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = size_budget.max(1);
    if rng.gen_bool(0.5) {
        let t = INHABITED[rng.gen_range(0..INHABITED.len())]();
        gen_typed(&mut rng, &mut vec![], &t, budget)
    } else {
        gen_untyped(&mut rng, 0, budget)
    }
}

const INHABITED: [fn() -> Tp; 5] = [
    || Tp::arrow(Tp::Base, Tp::Base),
    || Tp::arrow(Tp::Base, Tp::arrow(Tp::Base, Tp::Base)),
    || {
        let ii = Tp::arrow(Tp::Base, Tp::Base);
        Tp::arrow(ii.clone(), ii)
    },
    || {
        let ii = Tp::arrow(Tp::Base, Tp::Base);
        Tp::arrow(Tp::arrow(ii.clone(), ii.clone()), ii)
    },
    || {
        let ii = Tp::arrow(Tp::Base, Tp::Base);
        Tp::arrow(ii.clone(), Tp::arrow(Tp::Base, Tp::Base))
    },
];

/// Argument types. Closed terms of type `i` can only diverge, so `i` is rare.
fn small_type(rng: &mut ChaCha8Rng) -> Tp {
    let ii = Tp::arrow(Tp::Base, Tp::Base);
    match rng.gen_range(0..8) {
        0 => Tp::Base,
        1..=5 => ii,
        _ => Tp::arrow(ii.clone(), ii),
    }
}

/// `ctx[k]` types `Bnd` at distance `ctx.len() - 1 - k`.
fn gen_typed(rng: &mut ChaCha8Rng, ctx: &mut Vec<Tp>, t: &Tp, size: usize) -> Expr {
    let vars: Vec<usize> = (0..ctx.len()).filter(|&k| ctx[k] == *t).collect();
    let bnd = |ctx: &Vec<Tp>, k: usize| Expr::bnd((ctx.len() - 1 - k) as u32);
    if size <= 1 || (!vars.is_empty() && rng.gen_bool(0.3)) {
        if !vars.is_empty() {
            let k = vars[rng.gen_range(0..vars.len())];
            return bnd(ctx, k);
        }
        // head a variable whose result type is `t`, once
        if size == 1 {
            for k in (0..ctx.len()).rev() {
                if let Tp::Arrow(a, b) = ctx[k].clone() {
                    if *b == *t {
                        let arg = gen_typed(rng, ctx, &a, 0);
                        return app(bnd(ctx, k), arg);
                    }
                }
            }
        }
        if let Tp::Arrow(a, b) = t {
            ctx.push((**a).clone());
            let body = gen_typed(rng, ctx, b, 0);
            ctx.pop();
            return fun(body);
        }
        // no value of base type in scope: a diverging placeholder
        return fix(Expr::bnd(0));
    }
    let roll = rng.gen_range(0..10);
    match t {
        Tp::Arrow(a, b) if roll < 5 => {
            ctx.push((**a).clone());
            let body = gen_typed(rng, ctx, b, size - 1);
            ctx.pop();
            fun(body)
        }
        Tp::Arrow(..) if roll == 5 => {
            // fix f. fun y. body
            let Tp::Arrow(a, b) = t else { unreachable!() };
            ctx.push(t.clone());
            ctx.push((**a).clone());
            let body = gen_typed(rng, ctx, b, size.saturating_sub(2).max(1));
            ctx.pop();
            ctx.pop();
            fix(fun(body))
        }
        _ => {
            let a = small_type(rng);
            let left = size / 2;
            let f = gen_typed(rng, ctx, &Tp::arrow(a.clone(), t.clone()), left.max(1));
            let x = gen_typed(rng, ctx, &a, (size - 1 - left).max(1));
            app(f, x)
        }
    }
}

fn gen_untyped(rng: &mut ChaCha8Rng, depth: u32, size: usize) -> Expr {
    if size <= 1 {
        return if depth > 0 {
            Expr::bnd(rng.gen_range(0..depth))
        } else {
            fun(Expr::bnd(0))
        };
    }
    match rng.gen_range(0..10) {
        0 if depth > 0 => Expr::bnd(rng.gen_range(0..depth)),
        0..=3 => fun(gen_untyped(rng, depth + 1, size - 1)),
        4 => fix(gen_untyped(rng, depth + 1, size - 1)),
        _ => {
            let left = rng.gen_range(1..size);
            let l = gen_untyped(rng, depth, left);
            let r = gen_untyped(rng, depth, (size - left).max(1));
            app(l, r)
        }
    }
}

/// `n` generated terms with sizes cycling through 4..=16.
pub fn corpus(seed: u64, n: usize) -> Vec<Expr> {
    (0..n as u64)
        .map(|i| gen_closed_term(seed.wrapping_mul(1_000_003).wrapping_add(i), 4 + (i as usize % 13)))
        .collect()
}

/// Outcome of one subject-reduction instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SrOutcome {
    /// Every listed type of the program also types its value.
    Preserved {
        value: Expr,
        types: Vec<Tp>,
    },
    Violated(String),
    /// Some search or evaluation ran out of bound, steps or fuel.
    Inconclusive(String),
    /// The input is open, not proper, or has no type.
    Precondition(String),
}

impl SrOutcome {
    pub fn is_conclusive(&self) -> bool {
        matches!(self, SrOutcome::Preserved { .. } | SrOutcome::Violated(_))
    }
}

/// Settings shared by the instance checks.
#[derive(Clone, Debug)]
pub struct SrConfig {
    pub bound: u32,
    pub fuel: u64,
    pub types: usize,
    pub max_steps: u64,
}

impl Default for SrConfig {
    fn default() -> Self {
        SrConfig {
            bound: 60,
            fuel: DEFAULT_FUEL,
            types: 3,
            max_steps: 200_000,
        }
    }
}

/// The first `k` types of `e` found by the prover (unconstrained parts
/// read as `i`). `Err` carries the reason for an inconclusive search.
pub fn sl_types(db: &DbHH, e: &Expr, k: usize, bound: u32, max_steps: u64) -> Result<Result<Vec<Tp>, String>, Error> {
    let mut store = MetaStore::new();
    let t = store.fresh_meta(0);
    let goal = Goal::At(hastype(e.into(), UTerm::Meta(t)));
    let cfg = SearchConfig::dfs(bound).solutions(k).steps(max_steps);
    let out = solutions_hh(db, &[], &goal, &store, &cfg)?;
    if out.solutions.is_empty() && out.exhausted {
        return Ok(Err("type search cut short".into()));
    }
    Ok(Ok(out
        .solutions
        .iter()
        .filter_map(|s| Tp::from_expr(&s.store.ground(&UTerm::Meta(t), &db.default)))
        .collect()))
}

/// Checks that evaluation preserves the types of `e`, comparing the
/// prover's evaluation against [`meta_eval`] on the way.
pub fn sr_check_instance(db: &DbHH, e: &Expr, cfg: &SrConfig) -> Result<SrOutcome, Error> {
    if !proper(e) || e.max_var().is_some() {
        return Ok(SrOutcome::Precondition("term is not closed".into()));
    }
    let types = match sl_types(db, e, cfg.types, cfg.bound, cfg.max_steps)? {
        Err(m) => return Ok(SrOutcome::Inconclusive(m)),
        Ok(ts) if ts.is_empty() => return Ok(SrOutcome::Precondition("term has no type".into())),
        Ok(ts) => ts,
    };
    let v = match meta_eval(e, cfg.fuel)? {
        EvalOutcome::Value(v) => v,
        EvalOutcome::OutOfFuel => return Ok(SrOutcome::Inconclusive("no value within fuel".into())),
        EvalOutcome::Stuck => return Ok(SrOutcome::Violated("well-typed term is stuck".into())),
    };
    let mut store = MetaStore::new();
    let mv = store.fresh_meta(0);
    let goal = Goal::At(eval(e.into(), UTerm::Meta(mv)));
    let cfg_eval = SearchConfig::dfs(cfg.bound).steps(cfg.max_steps);
    match solutions_hh(db, &[], &goal, &store, &cfg_eval)?.first() {
        SearchResult::Proved(s) => {
            let w = s.store.ground(&UTerm::Meta(mv), &db.default);
            if w != v {
                return Ok(SrOutcome::Violated(format!(
                    "prover evaluates to {w:?}, evaluator to {v:?}"
                )));
            }
        }
        SearchResult::Failed => return Ok(SrOutcome::Violated("prover finds no value".into())),
        SearchResult::Exhausted => return Ok(SrOutcome::Inconclusive("evaluation search cut short".into())),
    }
    for t in &types {
        let g = Goal::At(hastype((&v).into(), t.to_uterm()));
        match prove_hh_steps(db, &g, cfg.bound, cfg.max_steps)? {
            SearchResult::Proved(_) => {}
            SearchResult::Failed => return Ok(SrOutcome::Violated(format!("value does not have type {t}"))),
            SearchResult::Exhausted => return Ok(SrOutcome::Inconclusive("value typing cut short".into())),
        }
    }
    Ok(SrOutcome::Preserved { value: v, types })
}

fn prove_hh_steps(
    db: &DbHH,
    g: &Goal<UTerm>,
    bound: u32,
    steps: u64,
) -> Result<SearchResult<crate::sl_hh::DerivationHH>, Error> {
    Ok(solutions_hh(db, &[], g, &MetaStore::new(), &SearchConfig::dfs(bound).steps(steps))?.first())
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::sl_hh::{check_hh, prove_hh};

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn nine_clauses() {
        let db = db_miniml();
        assert_eq!(db.clauses.len(), 9);
        let tp_fun = &db.clauses[7];
        assert!(matches!(&tp_fun.body, Goal::All(b) if matches!(&**b, Goal::Imp(a, g)
            if a.pred == "hastype" && matches!(&**g, Goal::At(h) if h.pred == "hastype"))));
        let ev_fun = &db.clauses[4];
        assert_eq!(ev_fun.body, Goal::At(isterm(tmpl::fun(0))));
        assert_eq!(db.clauses[1].abstr_conditions(), vec!["E"]);
    }

    #[test]
    fn eval_examples() {
        let id = p("fun x. x");
        assert_eq!(meta_eval(&id, 10).unwrap(), EvalOutcome::Value(id.clone()));
        assert_eq!(
            meta_eval(&p("(fun x. x) @ (fun y. y)"), 10).unwrap().value(),
            Some(p("fun y. y"))
        );
        let f = p("fix x. fun y. x @ y");
        let want = p("fun y. (fix x. fun y. x @ y) @ y");
        assert_eq!(meta_eval(&f, 10).unwrap().value(), Some(want));
        assert_eq!(meta_eval(&p("fix x. x"), 100).unwrap(), EvalOutcome::OutOfFuel);
        assert_eq!(meta_eval(&Expr::var(0), 10).unwrap(), EvalOutcome::Stuck);
        assert_eq!(meta_eval(&Expr::bnd(0), 10), Err(Error::NonProper));
    }

    #[test]
    fn show_keeps_names() {
        let e = p("fun x. fun y. x @ y");
        assert_eq!(show(&e).unwrap(), "fun x. fun y. x @ y");
        assert_eq!(show(&Expr::var(1)).unwrap(), "v1");
    }

    #[test]
    fn tp_roundtrip_and_display() {
        let ii = Tp::arrow(Tp::Base, Tp::Base);
        let t = Tp::arrow(ii.clone(), ii);
        assert_eq!(t.to_string(), "(i -> i) -> i -> i");
        assert_eq!(Tp::from_expr(&t.to_expr()), Some(t));
    }

    #[test]
    fn type_of_apply() {
        let db = db_miniml();
        let e = p("fun x. fun y. x @ y");
        let ts = sl_types(&db, &e, 1, 8, u64::MAX).unwrap().unwrap();
        let ii = Tp::arrow(Tp::Base, Tp::Base);
        assert_eq!(ts, vec![Tp::arrow(ii.clone(), ii)]);
    }

    #[test]
    fn prover_evaluates() {
        let db = db_miniml();
        let mut s = MetaStore::new();
        let v = s.fresh_meta(0);
        let g = Goal::At(eval((&p("(fun x. x) @ (fun y. y)")).into(), UTerm::Meta(v)));
        let r = prove_hh(&db, &[], 10, &g, &s).unwrap();
        let sol = r.solution().unwrap();
        assert_eq!(sol.store.ground(&UTerm::Meta(v), &db.default), p("fun y. y"));
        assert!(check_hh(&db, &sol.derivation).is_ok());
    }

    #[test]
    fn sr_examples() {
        let db = db_miniml();
        let cfg = SrConfig::default();
        let r = sr_check_instance(&db, &p("fun x. x"), &cfg).unwrap();
        let SrOutcome::Preserved { value, types } = r else {
            panic!("{r:?}")
        };
        assert_eq!(value, p("fun x. x"));
        assert!(types.contains(&Tp::arrow(Tp::Base, Tp::Base)));
        let r = sr_check_instance(&db, &Expr::var(0), &cfg).unwrap();
        assert!(matches!(r, SrOutcome::Precondition(_)));
    }

    #[test]
    fn generator_is_stable_and_closed() {
        for seed in 0..200 {
            let e = gen_closed_term(seed, 12);
            assert_eq!(e, gen_closed_term(seed, 12));
            assert!(proper(&e));
            assert!(e.max_var().is_none());
            assert!(signature().decode(&VarContext::empty(), &e).is_some());
        }
    }
}
