//! Minimal second-order hereditary Harrop logic: height-bounded
//! backchaining search and an independent derivation checker.
//!
//! Rule costs: `tt` and `init` close at any bound; `and`, `all`, `imp` and
//! backchaining need bound `n >= 1` and prove their premises at `n - 1`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::Error;
use crate::formula::{freshen_clause, unify_atoms, Atom, Clause, Goal, VarDecl};
use crate::pretty;
use crate::search::{self, Outcome, Rules, SearchConfig, SearchResult, State};
use crate::syntax::{level, proper, Expr};
use crate::unify::{MetaId, MetaStore, UTerm, UnifyError};

/// `head <- body`, universally closed over `vars`. Variable `i` appears
/// in the templates as metavariable id `i`.
#[derive(Clone, Debug)]
pub struct ClauseHH {
    pub name: &'static str,
    pub vars: Vec<VarDecl>,
    pub head: Atom<UTerm>,
    pub body: Goal<UTerm>,
}

impl ClauseHH {
    /// The arity-1 variables, which must be instantiated by abstractions.
    pub fn abstr_conditions(&self) -> Vec<&'static str> {
        self.vars.iter().filter(|v| v.arity == 1).map(|v| v.name).collect()
    }
}

impl Clause for ClauseHH {
    fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    fn offset_metas(&self, base: u32) -> Self {
        ClauseHH {
            name: self.name,
            vars: self.vars.clone(),
            head: self.head.offset_metas(base),
            body: self.body.offset_metas(base),
        }
    }
}

/// A clause database together with the constant used for answers that
/// the search leaves unconstrained.
#[derive(Clone, Debug)]
pub struct DbHH {
    pub clauses: Vec<ClauseHH>,
    pub default: Expr,
}

impl DbHH {
    pub fn new(clauses: Vec<ClauseHH>, default: Expr) -> Result<Self, Error> {
        for c in &clauses {
            if c.body.has_ord_imp() {
                return Err(Error::InvalidDatabase(format!("{}: ordered implication", c.name)));
            }
            let mut atoms = vec![&c.head];
            atoms.extend(c.body.atoms());
            check_template_atoms(c.name, &c.vars, &atoms)?;
        }
        check_pred_arities(clauses.iter().flat_map(|c| {
            let mut v = vec![&c.head];
            v.extend(c.body.atoms());
            v
        }))?;
        Ok(DbHH { clauses, default })
    }
}

pub(crate) fn check_template_atoms(name: &str, vars: &[VarDecl], atoms: &[&Atom<UTerm>]) -> Result<(), Error> {
    fn go(name: &str, vars: &[VarDecl], t: &UTerm) -> Result<(), Error> {
        let check = |m: &MetaId, want: u8| match vars.get(m.id as usize) {
            Some(v) if v.arity == want && m.arity == want => Ok(()),
            _ => Err(Error::InvalidDatabase(format!(
                "{name}: variable {m:?} has the wrong arity"
            ))),
        };
        match t {
            UTerm::Con(_) | UTerm::Var(_) | UTerm::Bnd(_) => Ok(()),
            UTerm::App(l, r) => {
                go(name, vars, l)?;
                go(name, vars, r)
            }
            UTerm::Abs(b, _) => go(name, vars, b),
            UTerm::Meta(m) => check(m, 0),
            UTerm::MApp(m, a) => {
                check(m, 1)?;
                go(name, vars, a)
            }
        }
    }
    for a in atoms {
        for t in &a.args {
            go(name, vars, t)?;
        }
    }
    Ok(())
}

pub(crate) fn check_pred_arities<'a>(atoms: impl Iterator<Item = &'a Atom<UTerm>>) -> Result<(), Error> {
    let mut seen: Vec<(&str, usize)> = vec![];
    for a in atoms {
        match seen.iter().find(|(p, _)| *p == a.pred) {
            Some((_, n)) if *n != a.args.len() => {
                return Err(Error::InvalidDatabase(format!(
                    "predicate {} used with {} and {} arguments",
                    a.pred,
                    n,
                    a.args.len()
                )))
            }
            Some(_) => {}
            None => seen.push((a.pred, a.args.len())),
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequentHH {
    pub ctx: Vec<Atom<Expr>>,
    pub bound: u32,
    pub goal: Goal<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleHH {
    Tt,
    And,
    All {
        eigen: u32,
    },
    Imp,
    Init,
    /// Backchaining on clause `clause`; `inst[i]` instantiates variable `i`
    /// (an abstraction body for arity-1 variables).
    Bc {
        clause: usize,
        inst: Vec<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationHH {
    pub sequent: SequentHH,
    pub rule: RuleHH,
    pub premises: Vec<DerivationHH>,
}

impl DerivationHH {
    /// Number of compound rules on the longest branch.
    pub fn height(&self) -> u32 {
        let below = self.premises.iter().map(|p| p.height()).max();
        match below {
            Some(h) => h + 1,
            None if matches!(self.rule, RuleHH::Tt | RuleHH::Init) => 0,
            None => 1,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Pre-order walk with depth.
    pub fn walk<'a>(&'a self, depth: usize, f: &mut impl FnMut(usize, &'a DerivationHH)) {
        f(depth, self);
        for p in &self.premises {
            p.walk(depth + 1, f);
        }
    }

    /// One line per node: `depth TAB rule TAB sequent`.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        self.walk(0, &mut |d, n| {
            let _ = writeln!(out, "{d}\t{}\t{}", rule_name(&n.rule), show_sequent(&n.sequent));
        });
        out
    }
}

pub fn rule_name(r: &RuleHH) -> String {
    match r {
        RuleHH::Tt => "ttR".into(),
        RuleHH::And => "andR".into(),
        RuleHH::All { eigen } => format!("allR[v{eigen}]"),
        RuleHH::Imp => "impR".into(),
        RuleHH::Init => "init".into(),
        RuleHH::Bc { clause, .. } => format!("bc#{clause}"),
    }
}

pub fn show_sequent(s: &SequentHH) -> String {
    let ctx: Vec<String> = s.ctx.iter().map(pretty::atom).collect();
    format!("{{{}}} |-{} {}", ctx.join(", "), s.bound, pretty::goal(&s.goal))
}

#[derive(Clone)]
pub(crate) struct Task {
    ctx: Arc<Vec<Atom<UTerm>>>,
    n: u32,
    goal: Arc<Goal<UTerm>>,
    node: usize,
}

pub(crate) enum NodeRule {
    Tt,
    And,
    All(u32),
    Imp,
    Init,
    Bc(usize, u32),
}

pub(crate) struct Node {
    ctx: Arc<Vec<Atom<UTerm>>>,
    n: u32,
    goal: Arc<Goal<UTerm>>,
    rule: NodeRule,
    kids: Vec<usize>,
}

struct Hh<'a> {
    db: &'a DbHH,
}

fn unify_outcome(r: Result<(), UnifyError>) -> Result<bool, Error> {
    match r {
        Ok(()) => Ok(true),
        Err(UnifyError::NonPattern(m)) => Err(Error::NonPattern(m)),
        Err(_) => Ok(false),
    }
}

impl Hh<'_> {
    fn node(&self, t: &Task, rule: NodeRule, kids: Vec<usize>) -> Node {
        Node {
            ctx: t.ctx.clone(),
            n: t.n,
            goal: t.goal.clone(),
            rule,
            kids,
        }
    }
}

impl Rules for Hh<'_> {
    type Task = Task;
    type Node = Node;

    fn branches(&self, t: &Task, _: &State<Node>) -> Result<usize, Error> {
        Ok(match &*t.goal {
            Goal::At(_) => t.ctx.len() + self.db.clauses.len(),
            Goal::OrdImp(..) => return Err(Error::UnsupportedGoal("ordered implication".into())),
            _ => 1,
        })
    }

    fn apply(&self, t: &Task, b: usize, st: &mut State<Node>) -> Result<Option<Vec<Task>>, Error> {
        let needs_height = !matches!(&*t.goal, Goal::Tt | Goal::At(_));
        if needs_height && t.n == 0 {
            st.hit_bound = true;
            return Ok(None);
        }
        let sub = |goal: Goal<UTerm>, ctx: Arc<Vec<Atom<UTerm>>>, node: usize| Task {
            ctx,
            n: t.n - 1,
            goal: Arc::new(goal),
            node,
        };
        match &*t.goal {
            Goal::Tt => {
                st.fill(t.node, self.node(t, NodeRule::Tt, vec![]));
                Ok(Some(vec![]))
            }
            Goal::And(g1, g2) => {
                let (k1, k2) = (st.alloc(), st.alloc());
                st.fill(t.node, self.node(t, NodeRule::And, vec![k1, k2]));
                Ok(Some(vec![
                    sub((**g1).clone(), t.ctx.clone(), k1),
                    sub((**g2).clone(), t.ctx.clone(), k2),
                ]))
            }
            Goal::Imp(a, g) => {
                let a2 = a.resolve(&st.store);
                let mut ctx = (*t.ctx).clone();
                if !ctx.iter().any(|c| c.resolve(&st.store) == a2) {
                    ctx.push(a.clone());
                }
                let k = st.alloc();
                st.fill(t.node, self.node(t, NodeRule::Imp, vec![k]));
                Ok(Some(vec![sub((**g).clone(), Arc::new(ctx), k)]))
            }
            Goal::All(g) => {
                let Expr::Var(x) = st.store.fresh_eigen() else {
                    unreachable!()
                };
                let body = g.open(&UTerm::Var(x));
                let k = st.alloc();
                st.fill(t.node, self.node(t, NodeRule::All(x), vec![k]));
                Ok(Some(vec![sub(body, t.ctx.clone(), k)]))
            }
            Goal::OrdImp(..) => Err(Error::UnsupportedGoal("ordered implication".into())),
            Goal::At(a) => {
                if b < t.ctx.len() {
                    if !unify_outcome(unify_atoms(&mut st.store, a, &t.ctx[b]))? {
                        return Ok(None);
                    }
                    st.fill(t.node, self.node(t, NodeRule::Init, vec![]));
                    return Ok(Some(vec![]));
                }
                let ci = b - t.ctx.len();
                let (c, base) = freshen_clause(&self.db.clauses[ci], &mut st.store);
                if !unify_outcome(unify_atoms(&mut st.store, a, &c.head))? {
                    return Ok(None);
                }
                if t.n == 0 {
                    st.hit_bound = true;
                    return Ok(None);
                }
                let k = st.alloc();
                st.fill(t.node, self.node(t, NodeRule::Bc(ci, base), vec![k]));
                Ok(Some(vec![sub(c.body, t.ctx.clone(), k)]))
            }
        }
    }
}

fn extract(db: &DbHH, st: &State<Node>, i: usize) -> DerivationHH {
    let n = st.node(i);
    let s = &st.store;
    let d = &db.default;
    let rule = match n.rule {
        NodeRule::Tt => RuleHH::Tt,
        NodeRule::And => RuleHH::And,
        NodeRule::All(x) => RuleHH::All { eigen: x },
        NodeRule::Imp => RuleHH::Imp,
        NodeRule::Init => RuleHH::Init,
        NodeRule::Bc(ci, base) => RuleHH::Bc {
            clause: ci,
            inst: db.clauses[ci]
                .vars
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    s.ground_meta(
                        MetaId {
                            id: base + j as u32,
                            arity: v.arity,
                        },
                        d,
                    )
                })
                .collect(),
        },
    };
    let mut ctx: Vec<Atom<Expr>> = vec![];
    for a in n.ctx.iter() {
        let g = a.ground(s, d);
        if !ctx.contains(&g) {
            ctx.push(g);
        }
    }
    DerivationHH {
        sequent: SequentHH {
            ctx,
            bound: n.n,
            goal: n.goal.map(&|t| s.ground(t, d)),
        },
        rule,
        premises: n.kids.iter().map(|&k| extract(db, st, k)).collect(),
    }
}

/// Eigenvariables must start above every `VAR` in the query.
pub(crate) fn eigen_floor<'a>(atoms: impl Iterator<Item = &'a Atom<UTerm>>) -> u32 {
    atoms
        .filter_map(|a| a.args.iter().filter_map(|t| t.max_var()).max())
        .max()
        .map_or(0, |m| m + 1)
}

fn prepared_store(store: &MetaStore, ctx: &[Atom<UTerm>], goal: &Goal<UTerm>) -> MetaStore {
    let floor = eigen_floor(ctx.iter().chain(goal.atoms()));
    let mut s = store.clone();
    while s.eigen_counter() < floor {
        s.fresh_eigen();
    }
    s
}

/// Runs the search and returns every distinct answer found (keyed by the
/// grounded values of `store`'s metavariables).
pub fn solutions_hh(
    db: &DbHH,
    ctx: &[Atom<UTerm>],
    goal: &Goal<UTerm>,
    store: &MetaStore,
    cfg: &SearchConfig,
) -> Result<Outcome<DerivationHH>, Error> {
    if goal.has_ord_imp() {
        return Err(Error::UnsupportedGoal("ordered implication".into()));
    }
    let start = prepared_store(store, ctx, goal);
    let query_metas = store.meta_count();
    let ctx = Arc::new(ctx.to_vec());
    let goal = Arc::new(goal.clone());
    search::search(
        &Hh { db },
        &start,
        cfg,
        |st, bound| Task {
            ctx: ctx.clone(),
            n: bound,
            goal: goal.clone(),
            node: st.alloc(),
        },
        |st| {
            let key: Vec<Expr> = (0..query_metas)
                .map(|i| {
                    st.store
                        .ground(&UTerm::Meta(MetaId { id: i as u32, arity: 0 }), &db.default)
                })
                .collect();
            (extract(db, st, 0), key)
        },
    )
}

pub fn prove_hh(
    db: &DbHH,
    ctx: &[Atom<UTerm>],
    bound: u32,
    goal: &Goal<UTerm>,
    store: &MetaStore,
) -> Result<SearchResult<DerivationHH>, Error> {
    Ok(solutions_hh(db, ctx, goal, store, &SearchConfig::dfs(bound))?.first())
}

/// Why a derivation was rejected: the path of premise indices to the bad
/// node and a message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub msg: String,
}

pub(crate) fn fail<T>(path: &[usize], msg: impl Into<String>) -> Result<T, CheckFailure> {
    Err(CheckFailure {
        path: path.to_vec(),
        msg: msg.into(),
    })
}

/// Ground instance of a clause template.
pub(crate) fn inst_term(t: &UTerm, inst: &[Expr]) -> Option<UTerm> {
    Some(match t {
        UTerm::Con(_) | UTerm::Var(_) | UTerm::Bnd(_) => t.clone(),
        UTerm::App(l, r) => UTerm::app(inst_term(l, inst)?, inst_term(r, inst)?),
        UTerm::Abs(b, h) => UTerm::Abs(Arc::new(inst_term(b, inst)?), h.clone()),
        UTerm::Meta(m) => inst.get(m.id as usize)?.into(),
        UTerm::MApp(m, a) => {
            let body: UTerm = inst.get(m.id as usize)?.into();
            crate::unify::plug(&body, &inst_term(a, inst)?)
        }
    })
}

pub(crate) fn inst_atom(a: &Atom<UTerm>, inst: &[Expr]) -> Option<Atom<Expr>> {
    let mut args = vec![];
    for t in &a.args {
        args.push(inst_term(t, inst)?.to_expr()?);
    }
    Some(Atom::new(a.pred, args))
}

pub(crate) fn inst_goal(g: &Goal<UTerm>, inst: &[Expr]) -> Option<Goal<Expr>> {
    Some(match g {
        Goal::Tt => Goal::Tt,
        Goal::At(a) => Goal::At(inst_atom(a, inst)?),
        Goal::And(a, b) => Goal::and(inst_goal(a, inst)?, inst_goal(b, inst)?),
        Goal::Imp(a, h) => Goal::imp(inst_atom(a, inst)?, inst_goal(h, inst)?),
        Goal::OrdImp(a, h) => Goal::ord_imp(inst_atom(a, inst)?, inst_goal(h, inst)?),
        Goal::All(h) => Goal::all(inst_goal(h, inst)?),
    })
}

/// Each instantiation must be proper, or an abstraction for arity-1 vars.
pub(crate) fn check_inst(vars: &[VarDecl], inst: &[Expr]) -> Result<(), String> {
    if vars.len() != inst.len() {
        return Err(format!(
            "instantiation has {} entries for {} variables",
            inst.len(),
            vars.len()
        ));
    }
    for (v, e) in vars.iter().zip(inst) {
        let ok = if v.arity == 1 { level(1, e) } else { proper(e) };
        if !ok {
            return Err(format!("instantiation of {} violates its side condition", v.name));
        }
    }
    Ok(())
}

fn same_set(a: &[Atom<Expr>], b: &[Atom<Expr>]) -> bool {
    a.iter().all(|x| b.contains(x)) && b.iter().all(|x| a.contains(x))
}

pub fn check_hh(db: &DbHH, d: &DerivationHH) -> Result<(), CheckFailure> {
    let mut path = vec![];
    check_node(db, d, &mut path)
}

fn check_node(db: &DbHH, d: &DerivationHH, path: &mut Vec<usize>) -> Result<(), CheckFailure> {
    let s = &d.sequent;
    for a in &s.ctx {
        if !a.args.iter().all(proper) {
            return fail(path, "context atom with a non-proper argument");
        }
    }
    let want = match d.rule {
        RuleHH::Tt | RuleHH::Init => 0,
        RuleHH::And => 2,
        _ => 1,
    };
    if d.premises.len() != want {
        return fail(path, format!("{} expects {want} premises", rule_name(&d.rule)));
    }
    if want > 0 && s.bound == 0 {
        return fail(path, "compound rule at bound 0");
    }
    let prem = |i: usize| &d.premises[i].sequent;
    let expect = |i: usize, ctx: &[Atom<Expr>], goal: &Goal<Expr>| -> Result<(), CheckFailure> {
        let p = prem(i);
        if p.bound != s.bound - 1 {
            return fail(path, format!("premise {i} has bound {} under {}", p.bound, s.bound));
        }
        if !same_set(&p.ctx, ctx) {
            return fail(path, format!("premise {i} has the wrong context"));
        }
        if p.goal != *goal {
            return fail(path, format!("premise {i} proves the wrong goal"));
        }
        Ok(())
    };
    match (&d.rule, &s.goal) {
        (RuleHH::Tt, Goal::Tt) => {}
        (RuleHH::And, Goal::And(a, b)) => {
            expect(0, &s.ctx, a)?;
            expect(1, &s.ctx, b)?;
        }
        (RuleHH::Imp, Goal::Imp(a, g)) => {
            if !a.args.iter().all(proper) {
                return fail(path, "hypothesis with a non-proper argument");
            }
            let mut ctx = s.ctx.clone();
            if !ctx.contains(a) {
                ctx.push(a.clone());
            }
            expect(0, &ctx, g)?;
        }
        (RuleHH::All { eigen }, Goal::All(g)) => {
            if s.goal.has_var(*eigen) || s.ctx.iter().any(|a| a.has_var(*eigen)) {
                return fail(path, format!("eigenvariable v{eigen} is not fresh"));
            }
            expect(0, &s.ctx, &g.open(&Expr::Var(*eigen)))?;
        }
        (RuleHH::Init, Goal::At(a)) => {
            if !s.ctx.contains(a) {
                return fail(path, "init atom is not in the context");
            }
        }
        (RuleHH::Bc { clause, inst }, Goal::At(a)) => {
            if !a.args.iter().all(proper) {
                return fail(path, "atomic goal with a non-proper argument");
            }
            let Some(c) = db.clauses.get(*clause) else {
                return fail(path, format!("no clause #{clause}"));
            };
            if let Err(m) = check_inst(&c.vars, inst) {
                return fail(path, m);
            }
            match inst_atom(&c.head, inst) {
                Some(h) if h == *a => {}
                _ => return fail(path, format!("head of clause {} does not match", c.name)),
            }
            let Some(body) = inst_goal(&c.body, inst) else {
                return fail(path, "clause body does not instantiate");
            };
            expect(0, &s.ctx, &body)?;
        }
        (r, _) => return fail(path, format!("{} does not apply to this goal", rule_name(r))),
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(db, p, path)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::syntax::ConstId;

    const A: ConstId = ConstId::new("t", "a");
    const B: ConstId = ConstId::new("t", "b");

    fn p(c: ConstId) -> Atom<UTerm> {
        Atom::new("p", vec![UTerm::Con(c)])
    }

    fn db() -> DbHH {
        // p(b) <- p(a)
        DbHH::new(
            vec![ClauseHH {
                name: "pb",
                vars: vec![],
                head: p(B),
                body: Goal::At(p(A)),
            }],
            Expr::con(A),
        )
        .unwrap()
    }

    #[test]
    fn tt_at_zero() {
        let r = prove_hh(&db(), &[], 0, &Goal::Tt, &MetaStore::new()).unwrap();
        let s = r.solution().unwrap();
        assert_eq!(s.derivation.rule, RuleHH::Tt);
        let all = solutions_hh(
            &db(),
            &[],
            &Goal::Tt,
            &MetaStore::new(),
            &SearchConfig::dfs(3).solutions(5),
        )
        .unwrap();
        assert_eq!(all.solutions.len(), 1);
    }

    #[test]
    fn init_membership() {
        let r = prove_hh(&db(), &[p(A)], 3, &Goal::At(p(A)), &MetaStore::new()).unwrap();
        assert_eq!(r.solution().unwrap().derivation.rule, RuleHH::Init);
    }

    #[test]
    fn bound_and_failure() {
        let d = db();
        let s = MetaStore::new();
        assert!(matches!(
            prove_hh(&d, &[p(A)], 0, &Goal::At(p(B)), &s).unwrap(),
            SearchResult::Exhausted
        ));
        assert!(prove_hh(&d, &[p(A)], 1, &Goal::At(p(B)), &s).unwrap().is_proved());
        assert!(matches!(
            prove_hh(&d, &[], 5, &Goal::At(p(B)), &s).unwrap(),
            SearchResult::Failed
        ));
    }

    #[test]
    fn checker_rejects_height_zero_and() {
        let d = DerivationHH {
            sequent: SequentHH {
                ctx: vec![],
                bound: 0,
                goal: Goal::and(Goal::Tt, Goal::Tt),
            },
            rule: RuleHH::And,
            premises: vec![],
        };
        assert!(check_hh(&db(), &d).is_err());
    }

    #[test]
    fn rejects_ordered_goals() {
        let g = Goal::ord_imp(p(A), Goal::Tt);
        assert!(prove_hh(&db(), &[], 3, &g, &MetaStore::new()).is_err());
    }
}
