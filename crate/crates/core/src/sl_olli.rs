//! Ordered linear logic fragment: an intuitionistic context `gamma`, an
//! ordered context `omega`, and three mutually recursive judgments (goal,
//! ordered goal list, intuitionistic goal list).
//!
//! In an ordered list `(G, Gs)` the head `G` consumes a suffix of `omega`
//! and `Gs` the remaining prefix. Splits are tried with the empty prefix
//! first.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::Error;
use crate::formula::{freshen_clause, unify_atoms, Atom, Clause, Goal, VarDecl};
use crate::pretty;
use crate::search::{self, Outcome, Rules, SearchConfig, SearchResult, State};
use crate::sl_hh::{
    check_inst, check_pred_arities, check_template_atoms, eigen_floor, fail, inst_atom, inst_goal, CheckFailure,
};
use crate::syntax::{proper, Expr};
use crate::unify::{MetaId, MetaStore, UTerm, UnifyError};

/// `head <- [ordered] | [intuitionistic]`.
#[derive(Clone, Debug)]
pub struct ClauseOlli {
    pub name: &'static str,
    pub vars: Vec<VarDecl>,
    pub head: Atom<UTerm>,
    pub ordered: Vec<Goal<UTerm>>,
    pub intuit: Vec<Goal<UTerm>>,
}

impl ClauseOlli {
    pub fn abstr_conditions(&self) -> Vec<&'static str> {
        self.vars.iter().filter(|v| v.arity == 1).map(|v| v.name).collect()
    }
}

impl Clause for ClauseOlli {
    fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    fn offset_metas(&self, base: u32) -> Self {
        ClauseOlli {
            name: self.name,
            vars: self.vars.clone(),
            head: self.head.offset_metas(base),
            ordered: self.ordered.iter().map(|g| g.offset_metas(base)).collect(),
            intuit: self.intuit.iter().map(|g| g.offset_metas(base)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DbOlli {
    pub clauses: Vec<ClauseOlli>,
    pub default: Expr,
}

fn atoms_of(c: &ClauseOlli) -> Vec<&Atom<UTerm>> {
    let mut v = vec![&c.head];
    for g in c.ordered.iter().chain(&c.intuit) {
        v.extend(g.atoms());
    }
    v
}

impl DbOlli {
    pub fn new(clauses: Vec<ClauseOlli>, default: Expr) -> Result<Self, Error> {
        for c in &clauses {
            let atoms: Vec<_> = atoms_of(c);
            check_template_atoms(c.name, &c.vars, &atoms)?;
        }
        let all: Vec<_> = clauses.iter().flat_map(atoms_of).collect();
        check_pred_arities(all.into_iter())?;
        Ok(DbOlli { clauses, default })
    }
}

/// Every `(prefix, suffix)` split of `omega`, empty prefix first.
pub fn osplit_enum<T: Clone>(omega: &[T]) -> Vec<(Vec<T>, Vec<T>)> {
    (0..=omega.len())
        .map(|k| (omega[..k].to_vec(), omega[k..].to_vec()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequentOlli {
    Goal {
        gamma: Vec<Atom<Expr>>,
        omega: Vec<Atom<Expr>>,
        bound: u32,
        goal: Goal<Expr>,
    },
    OList {
        gamma: Vec<Atom<Expr>>,
        omega: Vec<Atom<Expr>>,
        bound: u32,
        goals: Vec<Goal<Expr>>,
    },
    IList {
        gamma: Vec<Atom<Expr>>,
        bound: u32,
        goals: Vec<Goal<Expr>>,
    },
}

impl SequentOlli {
    pub fn bound(&self) -> u32 {
        match self {
            SequentOlli::Goal { bound, .. } | SequentOlli::OList { bound, .. } | SequentOlli::IList { bound, .. } => {
                *bound
            }
        }
    }

    pub fn bound_mut(&mut self) -> &mut u32 {
        match self {
            SequentOlli::Goal { bound, .. } | SequentOlli::OList { bound, .. } | SequentOlli::IList { bound, .. } => {
                bound
            }
        }
    }

    pub fn gamma(&self) -> &[Atom<Expr>] {
        match self {
            SequentOlli::Goal { gamma, .. } | SequentOlli::OList { gamma, .. } | SequentOlli::IList { gamma, .. } => {
                gamma
            }
        }
    }

    pub fn gamma_mut(&mut self) -> &mut Vec<Atom<Expr>> {
        match self {
            SequentOlli::Goal { gamma, .. } | SequentOlli::OList { gamma, .. } | SequentOlli::IList { gamma, .. } => {
                gamma
            }
        }
    }

    pub fn omega(&self) -> &[Atom<Expr>] {
        match self {
            SequentOlli::Goal { omega, .. } | SequentOlli::OList { omega, .. } => omega,
            SequentOlli::IList { .. } => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleOlli {
    Tt,
    InitOmega,
    InitGamma,
    Imp,
    OrdImp,
    And,
    All {
        eigen: u32,
    },
    Bc {
        clause: usize,
        inst: Vec<Expr>,
    },
    OListNil,
    /// The tail gets the first `split` atoms of omega, the head the rest.
    OListCons {
        split: usize,
    },
    IListNil,
    IListCons,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationOlli {
    pub sequent: SequentOlli,
    pub rule: RuleOlli,
    pub premises: Vec<DerivationOlli>,
}

impl DerivationOlli {
    pub fn height(&self) -> u32 {
        match self.premises.iter().map(|p| p.height()).max() {
            Some(h) => h + 1,
            None if matches!(
                self.rule,
                RuleOlli::Tt | RuleOlli::InitOmega | RuleOlli::InitGamma | RuleOlli::OListNil | RuleOlli::IListNil
            ) =>
            {
                0
            }
            None => 1,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    pub fn walk<'a>(&'a self, depth: usize, f: &mut impl FnMut(usize, &'a DerivationOlli)) {
        f(depth, self);
        for p in &self.premises {
            p.walk(depth + 1, f);
        }
    }

    /// Split choices of every nonempty ordered list, in pre-order.
    pub fn splits(&self) -> Vec<usize> {
        let mut out = vec![];
        self.walk(0, &mut |_, n| {
            if let RuleOlli::OListCons { split } = n.rule {
                out.push(split);
            }
        });
        out
    }

    pub fn trace(&self) -> String {
        let mut out = String::new();
        self.walk(0, &mut |d, n| {
            let _ = writeln!(out, "{d}\t{}\t{}", rule_name(&n.rule), show_sequent(&n.sequent));
        });
        out
    }
}

pub fn rule_name(r: &RuleOlli) -> String {
    match r {
        RuleOlli::Tt => "ttR".into(),
        RuleOlli::InitOmega => "init_omega".into(),
        RuleOlli::InitGamma => "init_gamma".into(),
        RuleOlli::Imp => "impR".into(),
        RuleOlli::OrdImp => "ordimpR".into(),
        RuleOlli::And => "andR".into(),
        RuleOlli::All { eigen } => format!("allR[v{eigen}]"),
        RuleOlli::Bc { clause, .. } => format!("bc#{clause}"),
        RuleOlli::OListNil => "olist_nil".into(),
        RuleOlli::OListCons { split } => format!("olist split=({split})"),
        RuleOlli::IListNil => "ilist_nil".into(),
        RuleOlli::IListCons => "ilist".into(),
    }
}

pub fn show_sequent(s: &SequentOlli) -> String {
    let atoms = |v: &[Atom<Expr>]| v.iter().map(pretty::atom).collect::<Vec<_>>().join(", ");
    let goals = |v: &[Goal<Expr>]| v.iter().map(pretty::goal).collect::<Vec<_>>().join(", ");
    match s {
        SequentOlli::Goal {
            gamma,
            omega,
            bound,
            goal,
        } => {
            format!("{}; {} |-{bound} {}", atoms(gamma), atoms(omega), pretty::goal(goal))
        }
        SequentOlli::OList {
            gamma,
            omega,
            bound,
            goals: g,
        } => {
            format!("{}; {} |-{bound} olist[{}]", atoms(gamma), atoms(omega), goals(g))
        }
        SequentOlli::IList { gamma, bound, goals: g } => {
            format!("{} |-{bound} ilist[{}]", atoms(gamma), goals(g))
        }
    }
}

type Atoms = Arc<Vec<Atom<UTerm>>>;
type Goals = Arc<Vec<Goal<UTerm>>>;

#[derive(Clone)]
pub(crate) enum Task {
    Goal {
        gamma: Atoms,
        omega: Atoms,
        n: u32,
        goal: Arc<Goal<UTerm>>,
        node: usize,
    },
    OList {
        gamma: Atoms,
        omega: Atoms,
        n: u32,
        goals: Goals,
        idx: usize,
        node: usize,
    },
    IList {
        gamma: Atoms,
        n: u32,
        goals: Goals,
        idx: usize,
        node: usize,
    },
}

pub(crate) enum NodeRule {
    Tt,
    InitOmega,
    InitGamma,
    Imp,
    OrdImp,
    And,
    All(u32),
    Bc(usize, u32),
    OListNil,
    OListCons(usize),
    IListNil,
    IListCons,
}

pub(crate) struct Node {
    task: Task,
    rule: NodeRule,
    kids: Vec<usize>,
}

struct Olli<'a> {
    db: &'a DbOlli,
}

fn unified(r: Result<(), UnifyError>) -> Result<bool, Error> {
    match r {
        Ok(()) => Ok(true),
        Err(UnifyError::NonPattern(m)) => Err(Error::NonPattern(m)),
        Err(_) => Ok(false),
    }
}

impl Rules for Olli<'_> {
    type Task = Task;
    type Node = Node;

    fn branches(&self, t: &Task, _: &State<Node>) -> Result<usize, Error> {
        Ok(match t {
            Task::Goal { gamma, goal, .. } => match &**goal {
                Goal::At(_) => 1 + gamma.len() + self.db.clauses.len(),
                _ => 1,
            },
            Task::OList {
                omega, n, goals, idx, ..
            } => {
                if *idx == goals.len() || *n == 0 || *idx + 1 == goals.len() {
                    // a last goal must take all of omega: only the empty prefix can work
                    1
                } else {
                    omega.len() + 1
                }
            }
            Task::IList { .. } => 1,
        })
    }

    fn apply(&self, t: &Task, b: usize, st: &mut State<Node>) -> Result<Option<Vec<Task>>, Error> {
        match t {
            Task::Goal {
                gamma,
                omega,
                n,
                goal,
                node,
            } => {
                let n = *n;
                let needs_height = !matches!(&**goal, Goal::Tt | Goal::At(_));
                if needs_height && n == 0 {
                    st.hit_bound = true;
                    return Ok(None);
                }
                let fill = |st: &mut State<Node>, rule, kids| {
                    st.fill(
                        *node,
                        Node {
                            task: t.clone(),
                            rule,
                            kids,
                        },
                    )
                };
                let goal_task = |gamma: Atoms, omega: Atoms, g: Goal<UTerm>, node| Task::Goal {
                    gamma,
                    omega,
                    n: n - 1,
                    goal: Arc::new(g),
                    node,
                };
                match &**goal {
                    Goal::Tt => {
                        fill(st, NodeRule::Tt, vec![]);
                        Ok(Some(vec![]))
                    }
                    Goal::And(g1, g2) => {
                        let (k1, k2) = (st.alloc(), st.alloc());
                        fill(st, NodeRule::And, vec![k1, k2]);
                        Ok(Some(vec![
                            goal_task(gamma.clone(), omega.clone(), (**g1).clone(), k1),
                            goal_task(gamma.clone(), omega.clone(), (**g2).clone(), k2),
                        ]))
                    }
                    Goal::Imp(a, g) => {
                        let mut g2 = vec![a.clone()];
                        g2.extend(gamma.iter().cloned());
                        let k = st.alloc();
                        fill(st, NodeRule::Imp, vec![k]);
                        Ok(Some(vec![goal_task(Arc::new(g2), omega.clone(), (**g).clone(), k)]))
                    }
                    Goal::OrdImp(a, g) => {
                        let mut o2 = (**omega).clone();
                        o2.push(a.clone());
                        let k = st.alloc();
                        fill(st, NodeRule::OrdImp, vec![k]);
                        Ok(Some(vec![goal_task(gamma.clone(), Arc::new(o2), (**g).clone(), k)]))
                    }
                    Goal::All(g) => {
                        let Expr::Var(x) = st.store.fresh_eigen() else {
                            unreachable!()
                        };
                        let body = g.open(&UTerm::Var(x));
                        let k = st.alloc();
                        fill(st, NodeRule::All(x), vec![k]);
                        Ok(Some(vec![goal_task(gamma.clone(), omega.clone(), body, k)]))
                    }
                    Goal::At(a) => {
                        if b == 0 {
                            if omega.len() != 1 || !unified(unify_atoms(&mut st.store, a, &omega[0]))? {
                                return Ok(None);
                            }
                            fill(st, NodeRule::InitOmega, vec![]);
                            return Ok(Some(vec![]));
                        }
                        if b <= gamma.len() {
                            if !omega.is_empty() || !unified(unify_atoms(&mut st.store, a, &gamma[b - 1]))? {
                                return Ok(None);
                            }
                            fill(st, NodeRule::InitGamma, vec![]);
                            return Ok(Some(vec![]));
                        }
                        let ci = b - 1 - gamma.len();
                        let (c, base) = freshen_clause(&self.db.clauses[ci], &mut st.store);
                        if !unified(unify_atoms(&mut st.store, a, &c.head))? {
                            return Ok(None);
                        }
                        if n == 0 {
                            st.hit_bound = true;
                            return Ok(None);
                        }
                        let (ko, ki) = (st.alloc(), st.alloc());
                        fill(st, NodeRule::Bc(ci, base), vec![ko, ki]);
                        Ok(Some(vec![
                            Task::OList {
                                gamma: gamma.clone(),
                                omega: omega.clone(),
                                n: n - 1,
                                goals: Arc::new(c.ordered),
                                idx: 0,
                                node: ko,
                            },
                            Task::IList {
                                gamma: gamma.clone(),
                                n: n - 1,
                                goals: Arc::new(c.intuit),
                                idx: 0,
                                node: ki,
                            },
                        ]))
                    }
                }
            }
            Task::OList {
                gamma,
                omega,
                n,
                goals,
                idx,
                node,
            } => {
                let fill = |st: &mut State<Node>, rule, kids| {
                    st.fill(
                        *node,
                        Node {
                            task: t.clone(),
                            rule,
                            kids,
                        },
                    )
                };
                if *idx == goals.len() {
                    if !omega.is_empty() {
                        return Ok(None);
                    }
                    fill(st, NodeRule::OListNil, vec![]);
                    return Ok(Some(vec![]));
                }
                if *n == 0 {
                    st.hit_bound = true;
                    return Ok(None);
                }
                let k = b;
                let (k1, k2) = (st.alloc(), st.alloc());
                fill(st, NodeRule::OListCons(k), vec![k1, k2]);
                Ok(Some(vec![
                    Task::Goal {
                        gamma: gamma.clone(),
                        omega: Arc::new(omega[k..].to_vec()),
                        n: n - 1,
                        goal: Arc::new(goals[*idx].clone()),
                        node: k1,
                    },
                    Task::OList {
                        gamma: gamma.clone(),
                        omega: Arc::new(omega[..k].to_vec()),
                        n: n - 1,
                        goals: goals.clone(),
                        idx: idx + 1,
                        node: k2,
                    },
                ]))
            }
            Task::IList {
                gamma,
                n,
                goals,
                idx,
                node,
            } => {
                let fill = |st: &mut State<Node>, rule, kids| {
                    st.fill(
                        *node,
                        Node {
                            task: t.clone(),
                            rule,
                            kids,
                        },
                    )
                };
                if *idx == goals.len() {
                    fill(st, NodeRule::IListNil, vec![]);
                    return Ok(Some(vec![]));
                }
                if *n == 0 {
                    st.hit_bound = true;
                    return Ok(None);
                }
                let (k1, k2) = (st.alloc(), st.alloc());
                fill(st, NodeRule::IListCons, vec![k1, k2]);
                Ok(Some(vec![
                    Task::Goal {
                        gamma: gamma.clone(),
                        omega: Arc::new(vec![]),
                        n: n - 1,
                        goal: Arc::new(goals[*idx].clone()),
                        node: k1,
                    },
                    Task::IList {
                        gamma: gamma.clone(),
                        n: n - 1,
                        goals: goals.clone(),
                        idx: idx + 1,
                        node: k2,
                    },
                ]))
            }
        }
    }
}

fn extract(db: &DbOlli, st: &State<Node>, i: usize) -> DerivationOlli {
    let node = st.node(i);
    let s = &st.store;
    let d = &db.default;
    let atoms = |v: &[Atom<UTerm>]| v.iter().map(|a| a.ground(s, d)).collect::<Vec<_>>();
    let goals = |v: &[Goal<UTerm>]| v.iter().map(|g| g.map(&|t| s.ground(t, d))).collect::<Vec<_>>();
    let sequent = match &node.task {
        Task::Goal {
            gamma, omega, n, goal, ..
        } => SequentOlli::Goal {
            gamma: atoms(gamma),
            omega: atoms(omega),
            bound: *n,
            goal: goal.map(&|t| s.ground(t, d)),
        },
        Task::OList {
            gamma,
            omega,
            n,
            goals: g,
            idx,
            ..
        } => SequentOlli::OList {
            gamma: atoms(gamma),
            omega: atoms(omega),
            bound: *n,
            goals: goals(&g[*idx..]),
        },
        Task::IList {
            gamma,
            n,
            goals: g,
            idx,
            ..
        } => SequentOlli::IList {
            gamma: atoms(gamma),
            bound: *n,
            goals: goals(&g[*idx..]),
        },
    };
    let rule = match node.rule {
        NodeRule::Tt => RuleOlli::Tt,
        NodeRule::InitOmega => RuleOlli::InitOmega,
        NodeRule::InitGamma => RuleOlli::InitGamma,
        NodeRule::Imp => RuleOlli::Imp,
        NodeRule::OrdImp => RuleOlli::OrdImp,
        NodeRule::And => RuleOlli::And,
        NodeRule::All(x) => RuleOlli::All { eigen: x },
        NodeRule::Bc(ci, base) => RuleOlli::Bc {
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
        NodeRule::OListNil => RuleOlli::OListNil,
        NodeRule::OListCons(k) => RuleOlli::OListCons { split: k },
        NodeRule::IListNil => RuleOlli::IListNil,
        NodeRule::IListCons => RuleOlli::IListCons,
    };
    DerivationOlli {
        sequent,
        rule,
        premises: node.kids.iter().map(|&k| extract(db, st, k)).collect(),
    }
}

/// The three judgments as a query.
#[derive(Clone, Debug)]
pub enum QueryOlli {
    Goal(Goal<UTerm>),
    OList(Vec<Goal<UTerm>>),
    IList(Vec<Goal<UTerm>>),
}

pub fn solutions_olli(
    db: &DbOlli,
    gamma: &[Atom<UTerm>],
    omega: &[Atom<UTerm>],
    query: &QueryOlli,
    store: &MetaStore,
    cfg: &SearchConfig,
) -> Result<Outcome<DerivationOlli>, Error> {
    let goals: Vec<&Goal<UTerm>> = match query {
        QueryOlli::Goal(g) => vec![g],
        QueryOlli::OList(v) | QueryOlli::IList(v) => v.iter().collect(),
    };
    let floor = eigen_floor(gamma.iter().chain(omega).chain(goals.iter().flat_map(|g| g.atoms())));
    let mut start = store.clone();
    while start.eigen_counter() < floor {
        start.fresh_eigen();
    }
    let query_metas = store.meta_count();
    let gamma = Arc::new(gamma.to_vec());
    let omega = Arc::new(omega.to_vec());
    search::search(
        &Olli { db },
        &start,
        cfg,
        |st, n| {
            let node = st.alloc();
            match query {
                QueryOlli::Goal(g) => Task::Goal {
                    gamma: gamma.clone(),
                    omega: omega.clone(),
                    n,
                    goal: Arc::new(g.clone()),
                    node,
                },
                QueryOlli::OList(v) => Task::OList {
                    gamma: gamma.clone(),
                    omega: omega.clone(),
                    n,
                    goals: Arc::new(v.clone()),
                    idx: 0,
                    node,
                },
                QueryOlli::IList(v) => Task::IList {
                    gamma: gamma.clone(),
                    n,
                    goals: Arc::new(v.clone()),
                    idx: 0,
                    node,
                },
            }
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

pub fn prove_olli(
    db: &DbOlli,
    gamma: &[Atom<UTerm>],
    omega: &[Atom<UTerm>],
    bound: u32,
    goal: &Goal<UTerm>,
    store: &MetaStore,
) -> Result<SearchResult<DerivationOlli>, Error> {
    let q = QueryOlli::Goal(goal.clone());
    Ok(solutions_olli(db, gamma, omega, &q, store, &SearchConfig::dfs(bound))?.first())
}

pub fn prove_olist(
    db: &DbOlli,
    gamma: &[Atom<UTerm>],
    omega: &[Atom<UTerm>],
    bound: u32,
    goals: &[Goal<UTerm>],
    store: &MetaStore,
) -> Result<SearchResult<DerivationOlli>, Error> {
    let q = QueryOlli::OList(goals.to_vec());
    Ok(solutions_olli(db, gamma, omega, &q, store, &SearchConfig::dfs(bound))?.first())
}

pub fn prove_ilist(
    db: &DbOlli,
    gamma: &[Atom<UTerm>],
    bound: u32,
    goals: &[Goal<UTerm>],
    store: &MetaStore,
) -> Result<SearchResult<DerivationOlli>, Error> {
    let q = QueryOlli::IList(goals.to_vec());
    Ok(solutions_olli(db, gamma, &[], &q, store, &SearchConfig::dfs(bound))?.first())
}

pub fn check_olli(db: &DbOlli, d: &DerivationOlli) -> Result<(), CheckFailure> {
    let mut path = vec![];
    check_node(db, d, &mut path)
}

fn check_node(db: &DbOlli, d: &DerivationOlli, path: &mut Vec<usize>) -> Result<(), CheckFailure> {
    let s = &d.sequent;
    for a in s.gamma().iter().chain(s.omega()) {
        if !a.args.iter().all(proper) {
            return fail(path, "context atom with a non-proper argument");
        }
    }
    let want = match d.rule {
        RuleOlli::Tt | RuleOlli::InitOmega | RuleOlli::InitGamma | RuleOlli::OListNil | RuleOlli::IListNil => 0,
        RuleOlli::And | RuleOlli::Bc { .. } | RuleOlli::OListCons { .. } | RuleOlli::IListCons => 2,
        _ => 1,
    };
    if d.premises.len() != want {
        return fail(path, format!("{} expects {want} premises", rule_name(&d.rule)));
    }
    let n = s.bound();
    if want > 0 && n == 0 {
        return fail(path, "compound rule at bound 0");
    }
    let expect = |i: usize, want: SequentOlli| -> Result<(), CheckFailure> {
        if d.premises[i].sequent != want {
            return fail(path, format!("premise {i} does not match {}", rule_name(&d.rule)));
        }
        Ok(())
    };
    let goal_seq = |gamma: &[Atom<Expr>], omega: &[Atom<Expr>], goal: &Goal<Expr>| SequentOlli::Goal {
        gamma: gamma.to_vec(),
        omega: omega.to_vec(),
        bound: n.wrapping_sub(1),
        goal: goal.clone(),
    };
    match (&d.rule, s) {
        (RuleOlli::Tt, SequentOlli::Goal { goal: Goal::Tt, .. }) => {}
        (
            RuleOlli::InitOmega,
            SequentOlli::Goal {
                omega,
                goal: Goal::At(a),
                ..
            },
        ) => {
            if omega.len() != 1 || omega[0] != *a {
                return fail(path, "init_omega needs exactly the goal atom in omega");
            }
        }
        (
            RuleOlli::InitGamma,
            SequentOlli::Goal {
                gamma,
                omega,
                goal: Goal::At(a),
                ..
            },
        ) => {
            if !omega.is_empty() {
                return fail(path, "init_gamma with a nonempty ordered context");
            }
            if !gamma.contains(a) {
                return fail(path, "init_gamma atom is not in gamma");
            }
        }
        (
            RuleOlli::Imp,
            SequentOlli::Goal {
                gamma,
                omega,
                goal: Goal::Imp(a, g),
                ..
            },
        ) => {
            let mut g2 = vec![a.clone()];
            g2.extend(gamma.iter().cloned());
            expect(0, goal_seq(&g2, omega, g))?;
        }
        (
            RuleOlli::OrdImp,
            SequentOlli::Goal {
                gamma,
                omega,
                goal: Goal::OrdImp(a, g),
                ..
            },
        ) => {
            let mut o2 = omega.clone();
            o2.push(a.clone());
            expect(0, goal_seq(gamma, &o2, g))?;
        }
        (
            RuleOlli::And,
            SequentOlli::Goal {
                gamma,
                omega,
                goal: Goal::And(a, b),
                ..
            },
        ) => {
            expect(0, goal_seq(gamma, omega, a))?;
            expect(1, goal_seq(gamma, omega, b))?;
        }
        (
            RuleOlli::All { eigen },
            SequentOlli::Goal {
                gamma,
                omega,
                goal: goal @ Goal::All(g),
                ..
            },
        ) => {
            if goal.has_var(*eigen) || gamma.iter().chain(omega).any(|a| a.has_var(*eigen)) {
                return fail(path, format!("eigenvariable v{eigen} is not fresh"));
            }
            expect(0, goal_seq(gamma, omega, &g.open(&Expr::Var(*eigen))))?;
        }
        (
            RuleOlli::Bc { clause, inst },
            SequentOlli::Goal {
                gamma,
                omega,
                goal: Goal::At(a),
                ..
            },
        ) => {
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
            let inst_all = |v: &[Goal<UTerm>]| v.iter().map(|g| inst_goal(g, inst)).collect::<Option<Vec<_>>>();
            let (Some(ord), Some(int)) = (inst_all(&c.ordered), inst_all(&c.intuit)) else {
                return fail(path, "clause body does not instantiate");
            };
            expect(
                0,
                SequentOlli::OList {
                    gamma: gamma.clone(),
                    omega: omega.clone(),
                    bound: n - 1,
                    goals: ord,
                },
            )?;
            expect(
                1,
                SequentOlli::IList {
                    gamma: gamma.clone(),
                    bound: n - 1,
                    goals: int,
                },
            )?;
        }
        (RuleOlli::OListNil, SequentOlli::OList { omega, goals, .. }) => {
            if !goals.is_empty() || !omega.is_empty() {
                return fail(path, "olist_nil needs no goals and an empty ordered context");
            }
        }
        (
            RuleOlli::OListCons { split },
            SequentOlli::OList {
                gamma, omega, goals, ..
            },
        ) => {
            if goals.is_empty() {
                return fail(path, "olist cons on an empty list");
            }
            if *split > omega.len() {
                return fail(path, "split beyond the ordered context");
            }
            let (pre, suf) = omega.split_at(*split);
            expect(0, goal_seq(gamma, suf, &goals[0]))?;
            expect(
                1,
                SequentOlli::OList {
                    gamma: gamma.clone(),
                    omega: pre.to_vec(),
                    bound: n - 1,
                    goals: goals[1..].to_vec(),
                },
            )?;
        }
        (RuleOlli::IListNil, SequentOlli::IList { goals, .. }) => {
            if !goals.is_empty() {
                return fail(path, "ilist_nil with goals left");
            }
        }
        (RuleOlli::IListCons, SequentOlli::IList { gamma, goals, .. }) => {
            if goals.is_empty() {
                return fail(path, "ilist cons on an empty list");
            }
            expect(0, goal_seq(gamma, &[], &goals[0]))?;
            expect(
                1,
                SequentOlli::IList {
                    gamma: gamma.clone(),
                    bound: n - 1,
                    goals: goals[1..].to_vec(),
                },
            )?;
        }
        (r, _) => return fail(path, format!("{} does not apply here", rule_name(r))),
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

    fn empty_db() -> DbOlli {
        DbOlli::new(vec![], Expr::con(A)).unwrap()
    }

    #[test]
    fn osplit_order() {
        assert_eq!(osplit_enum::<u8>(&[]), vec![(vec![], vec![])]);
        assert_eq!(osplit_enum(&['a']), vec![(vec![], vec!['a']), (vec!['a'], vec![])]);
        assert_eq!(
            osplit_enum(&['a', 'b']),
            vec![
                (vec![], vec!['a', 'b']),
                (vec!['a'], vec!['b']),
                (vec!['a', 'b'], vec![])
            ]
        );
    }

    #[test]
    fn tt_discards_omega() {
        let s = MetaStore::new();
        let r = prove_olli(&empty_db(), &[], &[p(A), p(B), p(A)], 0, &Goal::Tt, &s).unwrap();
        assert!(r.is_proved());
    }

    #[test]
    fn init_omega_singleton() {
        let s = MetaStore::new();
        let db = empty_db();
        let r = prove_olli(&db, &[], &[p(A)], 0, &Goal::At(p(A)), &s).unwrap();
        assert_eq!(r.solution().unwrap().derivation.rule, RuleOlli::InitOmega);
        let r = prove_olli(&db, &[], &[p(A), p(B)], 4, &Goal::At(p(A)), &s).unwrap();
        assert!(matches!(r, SearchResult::Failed));
    }

    #[test]
    fn init_gamma_needs_empty_omega() {
        let s = MetaStore::new();
        let db = empty_db();
        assert!(prove_olli(&db, &[p(A)], &[], 0, &Goal::At(p(A)), &s)
            .unwrap()
            .is_proved());
        let r = prove_olli(&db, &[p(A)], &[p(B)], 3, &Goal::At(p(A)), &s).unwrap();
        assert!(matches!(r, SearchResult::Failed));
    }

    #[test]
    fn olist_cases() {
        let s = MetaStore::new();
        let db = empty_db();
        assert!(prove_olist(&db, &[], &[], 0, &[], &s).unwrap().is_proved());
        let r = prove_olist(&db, &[], &[p(A)], 1, &[Goal::At(p(A))], &s).unwrap();
        let d = r.solution().unwrap().derivation.clone();
        assert_eq!(d.splits(), vec![0]);
        assert!(check_olli(&db, &d).is_ok());
        // [a, b] against goals [b, a]: b takes the suffix, a the prefix
        let r = prove_olist(&db, &[], &[p(A), p(B)], 2, &[Goal::At(p(B)), Goal::At(p(A))], &s).unwrap();
        let d = r.solution().unwrap().derivation.clone();
        assert_eq!(d.splits(), vec![1, 0]);
        assert!(check_olli(&db, &d).is_ok());
        let r = prove_olist(&db, &[], &[p(A), p(B)], 5, &[Goal::At(p(A)), Goal::At(p(B))], &s).unwrap();
        assert!(matches!(r, SearchResult::Failed));
    }

    #[test]
    fn ilist_cases() {
        let s = MetaStore::new();
        let db = empty_db();
        assert!(prove_ilist(&db, &[], 0, &[], &s).unwrap().is_proved());
        assert!(prove_ilist(&db, &[], 1, &[Goal::Tt], &s).unwrap().is_proved());
    }

    #[test]
    fn ordered_implication_appends_right() {
        // b ->> (a ->> olist-free check): prove  p(a) ->> p(b) ->> tt  trivially, and
        // check the premise context order
        let s = MetaStore::new();
        let db = empty_db();
        let g = Goal::ord_imp(p(A), Goal::ord_imp(p(B), Goal::Tt));
        let r = prove_olli(&db, &[], &[], 2, &g, &s).unwrap();
        let d = &r.solution().unwrap().derivation;
        let SequentOlli::Goal { omega, .. } = &d.premises[0].premises[0].sequent else {
            panic!()
        };
        assert_eq!(
            omega,
            &vec![p(A).map(&|t| t.to_expr().unwrap()), p(B).map(&|t| t.to_expr().unwrap())]
        );
        assert!(check_olli(&db, d).is_ok());
    }

    #[test]
    fn checker_rejects_bad_split_and_init_gamma() {
        let s = MetaStore::new();
        let db = empty_db();
        let r = prove_olist(&db, &[], &[p(A), p(B)], 2, &[Goal::At(p(B)), Goal::At(p(A))], &s).unwrap();
        let mut d = r.solution().unwrap().derivation.clone();
        d.rule = RuleOlli::OListCons { split: 0 };
        assert!(check_olli(&db, &d).is_err());

        let r = prove_olli(&db, &[p(A)], &[], 0, &Goal::At(p(A)), &s).unwrap();
        let mut d = r.solution().unwrap().derivation.clone();
        if let SequentOlli::Goal { omega, .. } = &mut d.sequent {
            omega.push(p(B).map(&|t| t.to_expr().unwrap()));
        }
        assert!(check_olli(&db, &d).is_err());
    }
}
