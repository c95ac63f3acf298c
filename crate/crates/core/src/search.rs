//! Backtracking engine shared by both provers.
//!
//! Goals waiting to be proved sit on a persistent agenda; every task with
//! more than one way to proceed pushes a choicepoint. Derivation nodes are
//! allocated in an arena that is rolled back together with the store.

use std::rc::Rc;

use crate::error::Error;
use crate::unify::{Mark, MetaStore};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Dfs,
    Iddfs,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub bound: u32,
    pub strategy: Strategy,
    pub max_solutions: usize,
    /// Give up (reporting `Exhausted`) after this many rule applications.
    pub max_steps: Option<u64>,
}

impl SearchConfig {
    pub fn dfs(bound: u32) -> Self {
        SearchConfig {
            bound,
            strategy: Strategy::Dfs,
            max_solutions: 1,
            max_steps: None,
        }
    }

    pub fn iddfs(bound: u32) -> Self {
        SearchConfig {
            strategy: Strategy::Iddfs,
            ..Self::dfs(bound)
        }
    }

    pub fn solutions(mut self, k: usize) -> Self {
        self.max_solutions = k;
        self
    }

    pub fn steps(mut self, k: u64) -> Self {
        self.max_steps = Some(k);
        self
    }
}

/// One proof found by a search, with the store it left behind.
#[derive(Clone, Debug)]
pub struct Solution<D> {
    pub derivation: D,
    pub store: MetaStore,
}

#[derive(Clone, Debug)]
pub enum SearchResult<D> {
    Proved(Box<Solution<D>>),
    /// The whole space below the bound was explored.
    Failed,
    /// Some branch was cut by the bound or the step budget.
    Exhausted,
}

impl<D> SearchResult<D> {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchResult::Proved(_))
    }

    pub fn solution(&self) -> Option<&Solution<D>> {
        match self {
            SearchResult::Proved(s) => Some(s),
            _ => None,
        }
    }
}

/// All solutions found, and whether the search was cut short somewhere.
#[derive(Clone, Debug)]
pub struct Outcome<D> {
    pub solutions: Vec<Solution<D>>,
    pub exhausted: bool,
}

impl<D> Outcome<D> {
    pub fn first(mut self) -> SearchResult<D> {
        if self.solutions.is_empty() {
            if self.exhausted {
                SearchResult::Exhausted
            } else {
                SearchResult::Failed
            }
        } else {
            SearchResult::Proved(Box::new(self.solutions.swap_remove(0)))
        }
    }
}

pub(crate) struct State<N> {
    pub store: MetaStore,
    nodes: Vec<Option<N>>,
    fills: Vec<usize>,
    pub hit_bound: bool,
}

#[derive(Clone, Copy)]
struct StateMark {
    store: Mark,
    nodes: usize,
    fills: usize,
}

impl<N> State<N> {
    pub fn new(store: MetaStore) -> Self {
        State {
            store,
            nodes: vec![],
            fills: vec![],
            hit_bound: false,
        }
    }

    pub fn alloc(&mut self) -> usize {
        self.nodes.push(None);
        self.nodes.len() - 1
    }

    pub fn fill(&mut self, i: usize, n: N) {
        self.nodes[i] = Some(n);
        self.fills.push(i);
    }

    pub fn node(&self, i: usize) -> &N {
        self.nodes[i].as_ref().expect("unfilled derivation node")
    }

    fn mark(&self) -> StateMark {
        StateMark {
            store: self.store.mark(),
            nodes: self.nodes.len(),
            fills: self.fills.len(),
        }
    }

    fn undo(&mut self, m: StateMark) {
        self.store.undo(m.store);
        while self.fills.len() > m.fills {
            let i = self.fills.pop().unwrap();
            if i < self.nodes.len() {
                self.nodes[i] = None;
            }
        }
        self.nodes.truncate(m.nodes);
    }
}

pub(crate) trait Rules {
    type Task: Clone;
    type Node;

    /// Number of alternative ways to expand `t`.
    fn branches(&self, t: &Self::Task, st: &State<Self::Node>) -> Result<usize, Error>;

    /// Expands `t` by alternative `b`; `None` on failure.
    fn apply(&self, t: &Self::Task, b: usize, st: &mut State<Self::Node>) -> Result<Option<Vec<Self::Task>>, Error>;
}

struct Cell<T> {
    task: T,
    next: Agenda<T>,
}

type Agenda<T> = Option<Rc<Cell<T>>>;

fn push_all<T>(tasks: Vec<T>, mut rest: Agenda<T>) -> Agenda<T> {
    for task in tasks.into_iter().rev() {
        rest = Some(Rc::new(Cell { task, next: rest }));
    }
    rest
}

struct Choice<T> {
    task: T,
    next: usize,
    total: usize,
    rest: Agenda<T>,
    mark: StateMark,
}

pub(crate) enum Control {
    Continue,
    Stop,
}

/// Depth-first search from `root`; `on_solution` sees each complete proof.
/// Returns false when the step budget ran out.
pub(crate) fn run<R: Rules>(
    rules: &R,
    root: R::Task,
    st: &mut State<R::Node>,
    max_steps: Option<u64>,
    mut on_solution: impl FnMut(&State<R::Node>) -> Control,
) -> Result<bool, Error> {
    let mut agenda: Agenda<R::Task> = push_all(vec![root], None);
    let mut choices: Vec<Choice<R::Task>> = vec![];
    let mut steps: u64 = 0;
    let over = |steps: u64| max_steps.is_some_and(|m| steps > m);
    loop {
        let advanced = match agenda.take() {
            None => {
                if let Control::Stop = on_solution(st) {
                    return Ok(true);
                }
                false
            }
            Some(cell) => {
                steps += 1;
                if over(steps) {
                    return Ok(false);
                }
                let task = cell.task.clone();
                let rest = cell.next.clone();
                let total = rules.branches(&task, st)?;
                if total == 0 {
                    false
                } else {
                    let mark = st.mark();
                    if total > 1 {
                        choices.push(Choice {
                            task: task.clone(),
                            next: 1,
                            total,
                            rest: rest.clone(),
                            mark,
                        });
                    }
                    match rules.apply(&task, 0, st)? {
                        Some(subs) => {
                            agenda = push_all(subs, rest);
                            true
                        }
                        None => {
                            st.undo(mark);
                            false
                        }
                    }
                }
            }
        };
        if advanced {
            continue;
        }
        loop {
            let Some(cp) = choices.last_mut() else {
                return Ok(true);
            };
            st.undo(cp.mark);
            let b = cp.next;
            cp.next += 1;
            let task = cp.task.clone();
            let rest = cp.rest.clone();
            let mark = cp.mark;
            if cp.next >= cp.total {
                choices.pop();
            }
            steps += 1;
            if over(steps) {
                return Ok(false);
            }
            match rules.apply(&task, b, st)? {
                Some(subs) => {
                    agenda = push_all(subs, rest);
                    break;
                }
                None => st.undo(mark),
            }
        }
    }
}

/// Runs a search under `cfg`, collecting distinct solutions. `root` builds
/// the root task at a given bound; `extract` turns a finished state into a
/// derivation and a key used to drop duplicate answers.
pub(crate) fn search<R: Rules, D, K: PartialEq>(
    rules: &R,
    store: &MetaStore,
    cfg: &SearchConfig,
    root: impl Fn(&mut State<R::Node>, u32) -> R::Task,
    extract: impl Fn(&State<R::Node>) -> (D, K),
) -> Result<Outcome<D>, Error> {
    let bounds: Vec<u32> = match cfg.strategy {
        Strategy::Dfs => vec![cfg.bound],
        Strategy::Iddfs => (0..=cfg.bound).collect(),
    };
    let want = cfg.max_solutions.max(1);
    let mut found: Vec<(Solution<D>, K)> = vec![];
    let mut exhausted = false;
    for b in bounds {
        let mut st = State::new(store.clone());
        let task = root(&mut st, b);
        let completed = run(rules, task, &mut st, cfg.max_steps, |st| {
            let (d, k) = extract(st);
            if !found.iter().any(|(_, k2)| *k2 == k) {
                found.push((
                    Solution {
                        derivation: d,
                        store: st.store.clone(),
                    },
                    k,
                ));
            }
            if found.len() >= want {
                Control::Stop
            } else {
                Control::Continue
            }
        })?;
        exhausted = st.hit_bound || !completed;
        if found.len() >= want || !exhausted {
            break;
        }
    }
    Ok(Outcome {
        solutions: found.into_iter().map(|(s, _)| s).collect(),
        exhausted,
    })
}
