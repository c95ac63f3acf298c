//! Atoms and goal formulas shared by both specification logics.
//!
//! A goal under `All` refers to its binder as `Bnd(k + g)`, where `k` is
//! the number of term binders and `g` the number of inner `All`s between
//! the occurrence and the quantifier.

use std::sync::Arc;

use crate::syntax::Expr;
use crate::unify::{MetaStore, UTerm};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Atom<T> {
    pub pred: &'static str,
    pub args: Vec<T>,
}

impl<T> Atom<T> {
    pub fn new(pred: &'static str, args: Vec<T>) -> Self {
        Atom { pred, args }
    }

    pub fn map<U>(&self, f: &impl Fn(&T) -> U) -> Atom<U> {
        Atom {
            pred: self.pred,
            args: self.args.iter().map(f).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Goal<T> {
    Tt,
    At(Atom<T>),
    And(Arc<Goal<T>>, Arc<Goal<T>>),
    Imp(Atom<T>, Arc<Goal<T>>),
    /// Right ordered implication `A ->> G`; only meaningful in the ordered logic.
    OrdImp(Atom<T>, Arc<Goal<T>>),
    All(Arc<Goal<T>>),
}

/// Terms that can fill a goal-level binder.
pub trait Term: Clone + PartialEq + std::fmt::Debug {
    fn subst_bnd(&self, target: u32, arg: &Self) -> Self;
    fn max_var(&self) -> Option<u32>;
    fn has_var(&self, k: u32) -> bool;
}

impl Term for UTerm {
    fn subst_bnd(&self, target: u32, arg: &Self) -> Self {
        UTerm::subst_bnd(self, target, arg)
    }
    fn max_var(&self) -> Option<u32> {
        UTerm::max_var(self)
    }
    fn has_var(&self, k: u32) -> bool {
        uterm_has_var(self, k)
    }
}

fn uterm_has_var(t: &UTerm, k: u32) -> bool {
    match t {
        UTerm::Var(n) => *n == k,
        UTerm::Con(_) | UTerm::Bnd(_) | UTerm::Meta(_) => false,
        UTerm::App(l, r) => uterm_has_var(l, k) || uterm_has_var(r, k),
        UTerm::Abs(b, _) | UTerm::MApp(_, b) => uterm_has_var(b, k),
    }
}

impl Term for Expr {
    fn subst_bnd(&self, target: u32, arg: &Self) -> Self {
        match self {
            Expr::Bnd(j) if *j == target => arg.clone(),
            Expr::Con(_) | Expr::Var(_) | Expr::Bnd(_) => self.clone(),
            Expr::App(l, r) => Expr::app(l.subst_bnd(target, arg), r.subst_bnd(target, arg)),
            Expr::Abs(b, h) => Expr::abs_named(b.subst_bnd(target + 1, arg), h.clone()),
        }
    }
    fn max_var(&self) -> Option<u32> {
        Expr::max_var(self)
    }
    fn has_var(&self, k: u32) -> bool {
        Expr::has_var(self, k)
    }
}

impl<T: Term> Atom<T> {
    fn subst_bnd(&self, target: u32, arg: &T) -> Atom<T> {
        self.map(&|t| t.subst_bnd(target, arg))
    }

    pub fn max_var(&self) -> Option<u32> {
        self.args.iter().filter_map(|a| a.max_var()).max()
    }

    pub fn has_var(&self, k: u32) -> bool {
        self.args.iter().any(|a| a.has_var(k))
    }
}

impl<T> Goal<T> {
    pub fn at(a: Atom<T>) -> Self {
        Goal::At(a)
    }

    pub fn and(a: Goal<T>, b: Goal<T>) -> Self {
        Goal::And(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Atom<T>, g: Goal<T>) -> Self {
        Goal::Imp(a, Arc::new(g))
    }

    pub fn ord_imp(a: Atom<T>, g: Goal<T>) -> Self {
        Goal::OrdImp(a, Arc::new(g))
    }

    pub fn all(g: Goal<T>) -> Self {
        Goal::All(Arc::new(g))
    }

    pub fn map<U>(&self, f: &impl Fn(&T) -> U) -> Goal<U> {
        match self {
            Goal::Tt => Goal::Tt,
            Goal::At(a) => Goal::At(a.map(f)),
            Goal::And(a, b) => Goal::and(a.map(f), b.map(f)),
            Goal::Imp(a, g) => Goal::imp(a.map(f), g.map(f)),
            Goal::OrdImp(a, g) => Goal::ord_imp(a.map(f), g.map(f)),
            Goal::All(g) => Goal::all(g.map(f)),
        }
    }

    pub fn has_ord_imp(&self) -> bool {
        match self {
            Goal::Tt | Goal::At(_) => false,
            Goal::And(a, b) => a.has_ord_imp() || b.has_ord_imp(),
            Goal::Imp(_, g) | Goal::All(g) => g.has_ord_imp(),
            Goal::OrdImp(..) => true,
        }
    }

    pub fn atoms(&self) -> Vec<&Atom<T>> {
        let mut out = vec![];
        fn go<'a, T>(g: &'a Goal<T>, out: &mut Vec<&'a Atom<T>>) {
            match g {
                Goal::Tt => {}
                Goal::At(a) => out.push(a),
                Goal::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Goal::Imp(a, g) | Goal::OrdImp(a, g) => {
                    out.push(a);
                    go(g, out);
                }
                Goal::All(g) => go(g, out),
            }
        }
        go(self, &mut out);
        out
    }
}

impl<T: Term> Goal<T> {
    /// Instantiates the body of an `All` with a proper term.
    pub fn open(&self, arg: &T) -> Goal<T> {
        self.open_at(0, arg)
    }

    fn open_at(&self, g: u32, arg: &T) -> Goal<T> {
        match self {
            Goal::Tt => Goal::Tt,
            Goal::At(a) => Goal::At(a.subst_bnd(g, arg)),
            Goal::And(a, b) => Goal::and(a.open_at(g, arg), b.open_at(g, arg)),
            Goal::Imp(a, h) => Goal::imp(a.subst_bnd(g, arg), h.open_at(g, arg)),
            Goal::OrdImp(a, h) => Goal::ord_imp(a.subst_bnd(g, arg), h.open_at(g, arg)),
            Goal::All(h) => Goal::all(h.open_at(g + 1, arg)),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        self.atoms().into_iter().filter_map(|a| a.max_var()).max()
    }

    pub fn has_var(&self, k: u32) -> bool {
        self.atoms().into_iter().any(|a| a.has_var(k))
    }
}

impl Goal<UTerm> {
    pub fn offset_metas(&self, base: u32) -> Self {
        self.map(&|t| t.offset_metas(base))
    }
}

impl Atom<UTerm> {
    pub fn offset_metas(&self, base: u32) -> Self {
        self.map(&|t| t.offset_metas(base))
    }

    pub fn resolve(&self, s: &MetaStore) -> Self {
        self.map(&|t| s.resolve(t))
    }

    pub fn ground(&self, s: &MetaStore, default: &Expr) -> Atom<Expr> {
        self.map(&|t| s.ground(t, default))
    }
}

impl Atom<Expr> {
    pub fn lift(&self) -> Atom<UTerm> {
        self.map(&|t| t.into())
    }
}

impl Goal<Expr> {
    pub fn lift(&self) -> Goal<UTerm> {
        self.map(&|t| t.into())
    }
}

/// Unifies two atoms argument-wise.
pub fn unify_atoms(s: &mut MetaStore, a: &Atom<UTerm>, b: &Atom<UTerm>) -> Result<(), crate::unify::UnifyError> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return Err(crate::unify::UnifyError::Clash);
    }
    let mark = s.mark();
    for (x, y) in a.args.iter().zip(&b.args) {
        if let Err(e) = s.unify(x, y) {
            s.undo(mark);
            return Err(e);
        }
    }
    Ok(())
}

/// Clause variables: name and arity, indexed by their local meta id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: &'static str,
    pub arity: u8,
}

/// Anything whose clause-local metavariables can be renamed apart.
pub trait Clause: Clone {
    fn vars(&self) -> &[VarDecl];
    fn offset_metas(&self, base: u32) -> Self;
}

/// Renames a clause's variables to fresh metavariables of the same arity.
/// Returns the renamed clause and the first fresh id.
pub fn freshen_clause<C: Clause>(c: &C, store: &mut MetaStore) -> (C, u32) {
    let arities: Vec<u8> = c.vars().iter().map(|v| v.arity).collect();
    let base = store.fresh_block(&arities);
    (c.offset_metas(base), base)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::syntax::ConstId;
    use crate::unify::MetaId;

    const C: ConstId = ConstId::new("t", "c");

    #[test]
    fn open_nested() {
        // all x. all y. p(x, y)  with x = Bnd 1 and y = Bnd 0 in the inner body
        let g: Goal<Expr> = Goal::all(Goal::all(Goal::At(Atom::new("p", vec![Expr::bnd(1), Expr::bnd(0)]))));
        let Goal::All(body) = &g else { unreachable!() };
        let opened = body.open(&Expr::var(7));
        let Goal::All(inner) = &opened else { unreachable!() };
        let o2 = inner.open(&Expr::var(8));
        assert_eq!(o2, Goal::At(Atom::new("p", vec![Expr::var(7), Expr::var(8)])));
    }

    #[test]
    fn open_under_term_binder() {
        // all x. p(lam y. y x)
        let g: Goal<Expr> = Goal::At(Atom::new("p", vec![Expr::abs(Expr::app(Expr::bnd(0), Expr::bnd(1)))]));
        let o = g.open(&Expr::var(2));
        assert_eq!(
            o,
            Goal::At(Atom::new("p", vec![Expr::abs(Expr::app(Expr::bnd(0), Expr::var(2)))]))
        );
    }

    #[derive(Clone)]
    struct Tiny {
        vars: Vec<VarDecl>,
        head: Atom<UTerm>,
    }

    impl Clause for Tiny {
        fn vars(&self) -> &[VarDecl] {
            &self.vars
        }
        fn offset_metas(&self, base: u32) -> Self {
            Tiny {
                vars: self.vars.clone(),
                head: self.head.offset_metas(base),
            }
        }
    }

    #[test]
    fn freshen_shares_and_separates() {
        let x = MetaId { id: 0, arity: 0 };
        let e = MetaId { id: 1, arity: 1 };
        let c = Tiny {
            vars: vec![VarDecl { name: "X", arity: 0 }, VarDecl { name: "E", arity: 1 }],
            head: Atom::new("p", vec![UTerm::Meta(x), UTerm::Meta(x), UTerm::mapp(e, UTerm::Con(C))]),
        };
        let mut s = MetaStore::new();
        s.fresh_meta(0);
        let (f, base) = freshen_clause(&c, &mut s);
        assert_eq!(base, 1);
        assert_eq!(f.head.args[0], f.head.args[1]);
        assert_eq!(f.head.args[0], UTerm::Meta(MetaId { id: 1, arity: 0 }));
        assert!(matches!(&f.head.args[2], UTerm::MApp(m, _) if m.id == 2 && m.arity == 1));

        let ground = Tiny {
            vars: vec![],
            head: Atom::new("q", vec![UTerm::Con(C)]),
        };
        let (g, _) = freshen_clause(&ground, &mut s);
        assert_eq!(g.head, ground.head);
    }
}
