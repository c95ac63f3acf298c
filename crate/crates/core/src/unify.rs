//! Metavariables and second-order pattern unification.
//!
//! `MApp(m, x)` is an arity-1 metavariable applied to an argument. With `m`
//! bound to an abstraction body it reduces by plugging `x` into the hole;
//! with `m` unbound it is only solvable when `x` is a bound variable of the
//! problem or an eigenvariable younger than `m`.

use std::fmt;
use std::sync::Arc;

use crate::syntax::{ConstId, Expr, NameHint};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaId {
    pub id: u32,
    pub arity: u8,
}

impl fmt::Debug for MetaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.id)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum UTerm {
    Con(ConstId),
    Var(u32),
    Bnd(u32),
    App(Arc<UTerm>, Arc<UTerm>),
    Abs(Arc<UTerm>, NameHint),
    Meta(MetaId),
    MApp(MetaId, Arc<UTerm>),
}

impl fmt::Debug for UTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UTerm::Con(c) => write!(f, "CON {c:?}"),
            UTerm::Var(n) => write!(f, "VAR {n}"),
            UTerm::Bnd(j) => write!(f, "BND {j}"),
            UTerm::App(l, r) => write!(f, "APP({l:?}, {r:?})"),
            UTerm::Abs(b, _) => write!(f, "ABS({b:?})"),
            UTerm::Meta(m) => write!(f, "{m:?}"),
            UTerm::MApp(m, a) => write!(f, "{m:?}({a:?})"),
        }
    }
}

impl UTerm {
    pub fn app(l: UTerm, r: UTerm) -> UTerm {
        UTerm::App(Arc::new(l), Arc::new(r))
    }

    pub fn abs(b: UTerm) -> UTerm {
        UTerm::Abs(Arc::new(b), NameHint::none())
    }

    pub fn mapp(m: MetaId, a: UTerm) -> UTerm {
        UTerm::MApp(m, Arc::new(a))
    }

    pub fn meta(m: MetaId) -> UTerm {
        UTerm::Meta(m)
    }

    /// `None` when a metavariable remains.
    pub fn to_expr(&self) -> Option<Expr> {
        Some(match self {
            UTerm::Con(c) => Expr::Con(*c),
            UTerm::Var(n) => Expr::Var(*n),
            UTerm::Bnd(j) => Expr::Bnd(*j),
            UTerm::App(l, r) => Expr::app(l.to_expr()?, r.to_expr()?),
            UTerm::Abs(b, h) => Expr::abs_named(b.to_expr()?, h.clone()),
            UTerm::Meta(_) | UTerm::MApp(..) => return None,
        })
    }

    pub fn is_ground(&self) -> bool {
        match self {
            UTerm::Con(_) | UTerm::Var(_) | UTerm::Bnd(_) => true,
            UTerm::App(l, r) => l.is_ground() && r.is_ground(),
            UTerm::Abs(b, _) => b.is_ground(),
            UTerm::Meta(_) | UTerm::MApp(..) => false,
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            UTerm::Var(n) => Some(*n),
            UTerm::Con(_) | UTerm::Bnd(_) | UTerm::Meta(_) => None,
            UTerm::App(l, r) => l.max_var().max(r.max_var()),
            UTerm::Abs(b, _) | UTerm::MApp(_, b) => b.max_var(),
        }
    }

    /// Renames clause-local metavariable `i` to `base + i`.
    pub fn offset_metas(&self, base: u32) -> UTerm {
        match self {
            UTerm::Con(_) | UTerm::Var(_) | UTerm::Bnd(_) => self.clone(),
            UTerm::App(l, r) => UTerm::app(l.offset_metas(base), r.offset_metas(base)),
            UTerm::Abs(b, h) => UTerm::Abs(Arc::new(b.offset_metas(base)), h.clone()),
            UTerm::Meta(m) => UTerm::Meta(MetaId {
                id: m.id + base,
                arity: m.arity,
            }),
            UTerm::MApp(m, a) => UTerm::mapp(
                MetaId {
                    id: m.id + base,
                    arity: m.arity,
                },
                a.offset_metas(base),
            ),
        }
    }

    /// Replaces `Bnd(target + k)` at depth `k` by the proper term `arg`.
    pub fn subst_bnd(&self, target: u32, arg: &UTerm) -> UTerm {
        match self {
            UTerm::Bnd(j) if *j == target => arg.clone(),
            UTerm::Con(_) | UTerm::Var(_) | UTerm::Bnd(_) | UTerm::Meta(_) => self.clone(),
            UTerm::App(l, r) => UTerm::app(l.subst_bnd(target, arg), r.subst_bnd(target, arg)),
            UTerm::Abs(b, h) => UTerm::Abs(Arc::new(b.subst_bnd(target + 1, arg)), h.clone()),
            UTerm::MApp(m, a) => UTerm::mapp(*m, a.subst_bnd(target, arg)),
        }
    }
}

impl From<&Expr> for UTerm {
    fn from(e: &Expr) -> UTerm {
        match e {
            Expr::Con(c) => UTerm::Con(*c),
            Expr::Var(n) => UTerm::Var(*n),
            Expr::Bnd(j) => UTerm::Bnd(*j),
            Expr::App(l, r) => UTerm::app((&**l).into(), (&**r).into()),
            Expr::Abs(b, h) => UTerm::Abs(Arc::new((&**b).into()), h.clone()),
        }
    }
}

impl From<Expr> for UTerm {
    fn from(e: Expr) -> UTerm {
        (&e).into()
    }
}

/// Raises dangling indices (those `>= cutoff`) by `by`.
fn shift(t: &UTerm, by: u32, cutoff: u32) -> UTerm {
    if by == 0 {
        return t.clone();
    }
    match t {
        UTerm::Bnd(j) if *j >= cutoff => UTerm::Bnd(j + by),
        UTerm::Con(_) | UTerm::Var(_) | UTerm::Bnd(_) | UTerm::Meta(_) => t.clone(),
        UTerm::App(l, r) => UTerm::app(shift(l, by, cutoff), shift(r, by, cutoff)),
        UTerm::Abs(b, h) => UTerm::Abs(Arc::new(shift(b, by, cutoff + 1)), h.clone()),
        UTerm::MApp(m, a) => UTerm::mapp(*m, shift(a, by, cutoff)),
    }
}

/// Plugs `arg` into the hole of an abstraction body. For a proper `arg` this
/// is `instantiate`; for `arg = Bnd(i)` it is `lbind(i, _)`.
pub fn plug(body: &UTerm, arg: &UTerm) -> UTerm {
    fn go(t: &UTerm, arg: &UTerm, d: u32) -> UTerm {
        match t {
            UTerm::Bnd(j) if *j == d => shift(arg, d, 0),
            UTerm::Con(_) | UTerm::Var(_) | UTerm::Bnd(_) | UTerm::Meta(_) => t.clone(),
            UTerm::App(l, r) => UTerm::app(go(l, arg, d), go(r, arg, d)),
            UTerm::Abs(b, h) => UTerm::Abs(Arc::new(go(b, arg, d + 1)), h.clone()),
            UTerm::MApp(m, a) => UTerm::mapp(*m, go(a, arg, d)),
        }
    }
    go(body, arg, 0)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Binding {
    Term(UTerm),
    /// Abstraction body: the hole is the dangling index at each depth.
    Abs(UTerm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifyError {
    Clash,
    Occurs,
    Scope,
    NonPattern(String),
}

#[derive(Clone, Debug)]
struct MetaInfo {
    watermark: u32,
    binding: Option<Binding>,
}

#[derive(Clone, Debug)]
enum Trail {
    Bind(u32),
    Lower(u32, u32),
}

#[derive(Clone, Copy, Debug)]
pub struct Mark {
    trail: usize,
    metas: usize,
    eigen: u32,
}

#[derive(Clone, Debug, Default)]
pub struct MetaStore {
    metas: Vec<MetaInfo>,
    eigen: u32,
    trail: Vec<Trail>,
}

impl MetaStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// A store whose eigenvariables start above every `VAR` already in use.
    pub fn with_eigen_start(k: u32) -> Self {
        MetaStore {
            eigen: k,
            ..Self::default()
        }
    }

    pub fn fresh_meta(&mut self, arity: u8) -> MetaId {
        let id = self.metas.len() as u32;
        self.metas.push(MetaInfo {
            watermark: self.eigen,
            binding: None,
        });
        MetaId { id, arity }
    }

    /// Allocates consecutive metavariables; returns the first id.
    pub fn fresh_block(&mut self, arities: &[u8]) -> u32 {
        let base = self.metas.len() as u32;
        for &a in arities {
            self.fresh_meta(a);
        }
        base
    }

    pub fn fresh_eigen(&mut self) -> Expr {
        let k = self.eigen;
        self.eigen = k.checked_add(1).expect("eigenvariable counter overflow");
        Expr::Var(k)
    }

    pub fn eigen_counter(&self) -> u32 {
        self.eigen
    }

    pub fn watermark(&self, m: MetaId) -> u32 {
        self.metas[m.id as usize].watermark
    }

    pub fn binding(&self, m: MetaId) -> Option<&Binding> {
        self.metas.get(m.id as usize).and_then(|i| i.binding.as_ref())
    }

    pub fn meta_count(&self) -> usize {
        self.metas.len()
    }

    pub fn mark(&self) -> Mark {
        Mark {
            trail: self.trail.len(),
            metas: self.metas.len(),
            eigen: self.eigen,
        }
    }

    pub fn undo(&mut self, mark: Mark) {
        while self.trail.len() > mark.trail {
            match self.trail.pop().unwrap() {
                Trail::Bind(id) => self.metas[id as usize].binding = None,
                Trail::Lower(id, old) => self.metas[id as usize].watermark = old,
            }
        }
        self.metas.truncate(mark.metas);
        self.eigen = mark.eigen;
    }

    /// Head-normalizes through bound metavariables.
    pub fn deref(&self, t: &UTerm) -> UTerm {
        let mut t = t.clone();
        loop {
            match &t {
                UTerm::Meta(m) => match self.binding(*m) {
                    Some(Binding::Term(u)) => t = u.clone(),
                    _ => return t,
                },
                UTerm::MApp(m, a) => match self.binding(*m) {
                    Some(Binding::Abs(body)) => t = plug(body, a),
                    _ => return t,
                },
                _ => return t,
            }
        }
    }

    pub fn resolve(&self, t: &UTerm) -> UTerm {
        match self.deref(t) {
            t @ (UTerm::Con(_) | UTerm::Var(_) | UTerm::Bnd(_) | UTerm::Meta(_)) => t,
            UTerm::App(l, r) => UTerm::app(self.resolve(&l), self.resolve(&r)),
            UTerm::Abs(b, h) => UTerm::Abs(Arc::new(self.resolve(&b)), h),
            UTerm::MApp(m, a) => UTerm::mapp(m, self.resolve(&a)),
        }
    }

    /// Resolves and replaces what is still unknown by `default` (an
    /// arity-1 leftover becomes the constant abstraction of `default`).
    pub fn ground(&self, t: &UTerm, default: &Expr) -> Expr {
        match self.deref(t) {
            UTerm::Con(c) => Expr::Con(c),
            UTerm::Var(n) => Expr::Var(n),
            UTerm::Bnd(j) => Expr::Bnd(j),
            UTerm::App(l, r) => Expr::app(self.ground(&l, default), self.ground(&r, default)),
            UTerm::Abs(b, h) => Expr::abs_named(self.ground(&b, default), h),
            UTerm::Meta(_) | UTerm::MApp(..) => default.clone(),
        }
    }

    /// Ground value of a metavariable; for arity 1 the abstraction body.
    pub fn ground_meta(&self, m: MetaId, default: &Expr) -> Expr {
        match self.binding(m) {
            Some(Binding::Term(t)) => self.ground(t, default),
            Some(Binding::Abs(b)) => self.ground(b, default),
            None => default.clone(),
        }
    }

    pub fn unify(&mut self, a: &UTerm, b: &UTerm) -> Result<(), UnifyError> {
        let mark = self.mark();
        let r = self.unify_at(a, b, 0);
        if r.is_err() {
            self.undo(mark);
        }
        r
    }

    fn unify_at(&mut self, a: &UTerm, b: &UTerm, d: u32) -> Result<(), UnifyError> {
        let a = self.deref(a);
        let b = self.deref(b);
        match (&a, &b) {
            (UTerm::Meta(m), UTerm::Meta(n)) if m == n => Ok(()),
            (UTerm::Meta(m), _) => self.bind_term(*m, &b),
            (_, UTerm::Meta(n)) => self.bind_term(*n, &a),
            (UTerm::MApp(m, x), UTerm::MApp(n, y)) if m == n && self.resolve(x) == self.resolve(y) => Ok(()),
            (UTerm::MApp(m, x), _) => self.bind_pattern(*m, x, &b, d),
            (_, UTerm::MApp(n, y)) => self.bind_pattern(*n, y, &a, d),
            (UTerm::Con(x), UTerm::Con(y)) if x == y => Ok(()),
            (UTerm::Var(x), UTerm::Var(y)) if x == y => Ok(()),
            (UTerm::Bnd(x), UTerm::Bnd(y)) if x == y => Ok(()),
            (UTerm::App(l1, r1), UTerm::App(l2, r2)) => {
                self.unify_at(l1, l2, d)?;
                self.unify_at(r1, r2, d)
            }
            (UTerm::Abs(x, _), UTerm::Abs(y, _)) => self.unify_at(x, y, d + 1),
            _ => Err(UnifyError::Clash),
        }
    }

    fn push_binding(&mut self, m: MetaId, b: Binding) {
        self.metas[m.id as usize].binding = Some(b);
        self.trail.push(Trail::Bind(m.id));
    }

    fn lower(&mut self, n: MetaId, wm: u32) {
        let info = &mut self.metas[n.id as usize];
        if info.watermark > wm {
            self.trail.push(Trail::Lower(n.id, info.watermark));
            info.watermark = wm;
        }
    }

    fn bind_term(&mut self, m: MetaId, t: &UTerm) -> Result<(), UnifyError> {
        let wm = self.watermark(m);
        let body = self.rebuild(t, m, wm, 0, None)?;
        self.push_binding(m, Binding::Term(body));
        Ok(())
    }

    fn bind_pattern(&mut self, m: MetaId, x: &UTerm, t: &UTerm, d: u32) -> Result<(), UnifyError> {
        let wm = self.watermark(m);
        let hole = match self.deref(x) {
            UTerm::Bnd(i) if i < d => Hole::Bnd(i),
            UTerm::Var(k) if k >= wm => Hole::Var(k),
            other => {
                return Err(UnifyError::NonPattern(format!(
                    "{m:?} applied to {:?}",
                    self.resolve(&other)
                )))
            }
        };
        let body = self.rebuild(t, m, wm, 0, Some(hole))?;
        self.push_binding(m, Binding::Abs(body));
        Ok(())
    }

    /// Copies `t` for binding into `m`: occurs and scope checks, watermark
    /// lowering, and (for patterns) turning the argument into the hole.
    /// `k` counts binders crossed inside `t`.
    fn rebuild(&mut self, t: &UTerm, m: MetaId, wm: u32, k: u32, hole: Option<Hole>) -> Result<UTerm, UnifyError> {
        let t = self.deref(t);
        Ok(match t {
            UTerm::Con(_) => t,
            UTerm::Bnd(j) if j < k => t,
            UTerm::Bnd(j) => match hole {
                Some(Hole::Bnd(i)) if j == i + k => UTerm::Bnd(k),
                _ => return Err(UnifyError::Clash),
            },
            UTerm::Var(v) => match hole {
                Some(Hole::Var(x)) if v == x => UTerm::Bnd(k),
                _ if v >= wm => return Err(UnifyError::Scope),
                _ => t,
            },
            UTerm::App(l, r) => UTerm::app(self.rebuild(&l, m, wm, k, hole)?, self.rebuild(&r, m, wm, k, hole)?),
            UTerm::Abs(b, h) => UTerm::Abs(Arc::new(self.rebuild(&b, m, wm, k + 1, hole)?), h),
            UTerm::Meta(n) => {
                if n == m {
                    return Err(UnifyError::Occurs);
                }
                self.lower(n, wm);
                t
            }
            UTerm::MApp(n, a) => {
                if n == m {
                    return Err(UnifyError::Occurs);
                }
                self.lower(n, wm);
                match self.rebuild(&a, m, wm, k, hole) {
                    Ok(a) => UTerm::mapp(n, a),
                    Err(UnifyError::Clash) | Err(UnifyError::Scope) => {
                        return Err(UnifyError::NonPattern(format!(
                            "{n:?} would need pruning inside a binding of {m:?}"
                        )))
                    }
                    Err(e) => return Err(e),
                }
            }
        })
    }
}

#[derive(Clone, Copy)]
enum Hole {
    Bnd(u32),
    Var(u32),
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::syntax::{instantiate, lambda, Abstraction};

    const C: ConstId = ConstId::new("t", "c");
    const D: ConstId = ConstId::new("t", "d");

    fn e2u(e: &Expr) -> UTerm {
        e.into()
    }

    #[test]
    fn fresh_meta_watermarks() {
        let mut s = MetaStore::new();
        let m = s.fresh_meta(0);
        assert_eq!((m.id, s.watermark(m)), (0, 0));
        assert_eq!(s.fresh_eigen(), Expr::Var(0));
        let n = s.fresh_meta(1);
        assert_eq!(s.watermark(n), 1);
        assert_ne!(m, n);
    }

    #[test]
    fn fresh_eigen_counts() {
        let mut s = MetaStore::with_eigen_start(5);
        assert_eq!(s.fresh_eigen(), Expr::Var(5));
        assert_eq!(s.fresh_eigen(), Expr::Var(6));
    }

    #[test]
    fn bind_constant() {
        let mut s = MetaStore::new();
        let m = s.fresh_meta(0);
        s.unify(&UTerm::Meta(m), &UTerm::Con(C)).unwrap();
        assert_eq!(s.resolve(&UTerm::Meta(m)), UTerm::Con(C));
    }

    #[test]
    fn pattern_case() {
        let mut s = MetaStore::new();
        let e = s.fresh_meta(1);
        let lhs = UTerm::abs(UTerm::mapp(e, UTerm::Bnd(0)));
        let body = Expr::app(Expr::bnd(0), Expr::bnd(0));
        let rhs = Expr::abs(body.clone());
        s.unify(&lhs, &e2u(&rhs)).unwrap();
        let bound = s.ground_meta(e, &Expr::con(C));
        assert_eq!(bound, body);
        let a = Abstraction::from_body(bound);
        assert_eq!(lambda(&a), rhs);
        let x = Expr::var(3);
        assert_eq!(
            s.resolve(&UTerm::mapp(e, e2u(&x))).to_expr().unwrap(),
            instantiate(&a, &x).unwrap()
        );
    }

    #[test]
    fn pattern_under_inner_binder() {
        // lam x. ?E(x) = lam x. lam y. y x
        let mut s = MetaStore::new();
        let e = s.fresh_meta(1);
        let lhs = UTerm::abs(UTerm::mapp(e, UTerm::Bnd(0)));
        let rhs = Expr::abs(Expr::abs(Expr::app(Expr::bnd(0), Expr::bnd(1))));
        s.unify(&lhs, &e2u(&rhs)).unwrap();
        assert_eq!(
            s.ground_meta(e, &Expr::con(C)),
            Expr::abs(Expr::app(Expr::bnd(0), Expr::bnd(1)))
        );
        assert_eq!(s.resolve(&lhs).to_expr().unwrap(), rhs);
    }

    #[test]
    fn scope_violation() {
        let mut s = MetaStore::new();
        let m = s.fresh_meta(0);
        let k = s.fresh_eigen();
        assert_eq!(s.unify(&UTerm::Meta(m), &e2u(&k)), Err(UnifyError::Scope));
        let n = s.fresh_meta(0);
        assert_eq!(s.unify(&UTerm::Meta(n), &e2u(&k)), Ok(()));
    }

    #[test]
    fn watermark_lowered_through_binding() {
        let mut s = MetaStore::new();
        let old = s.fresh_meta(0);
        let k = s.fresh_eigen();
        let young = s.fresh_meta(0);
        s.unify(&UTerm::Meta(old), &UTerm::app(UTerm::Con(C), UTerm::Meta(young)))
            .unwrap();
        assert_eq!(s.watermark(young), 0);
        assert_eq!(s.unify(&UTerm::Meta(young), &e2u(&k)), Err(UnifyError::Scope));
    }

    #[test]
    fn occurs_check() {
        let mut s = MetaStore::new();
        let m = s.fresh_meta(0);
        let t = UTerm::app(UTerm::Con(C), UTerm::Meta(m));
        assert_eq!(s.unify(&UTerm::Meta(m), &t), Err(UnifyError::Occurs));
    }

    #[test]
    fn clash_and_rollback() {
        let mut s = MetaStore::new();
        let m = s.fresh_meta(0);
        let a = UTerm::app(UTerm::Meta(m), UTerm::Con(C));
        let b = UTerm::app(UTerm::Con(D), UTerm::Con(D));
        assert_eq!(s.unify(&a, &b), Err(UnifyError::Clash));
        assert!(s.binding(m).is_none());
    }

    #[test]
    fn non_pattern_rejected() {
        let mut s = MetaStore::new();
        let e = s.fresh_meta(1);
        let t = UTerm::mapp(e, UTerm::Con(C));
        assert!(matches!(s.unify(&t, &UTerm::Con(D)), Err(UnifyError::NonPattern(_))));
    }

    #[test]
    fn eigen_pattern() {
        let mut s = MetaStore::new();
        let e = s.fresh_meta(1);
        let x = s.fresh_eigen();
        let lhs = UTerm::mapp(e, e2u(&x));
        let rhs = Expr::app(Expr::con(C), x.clone());
        s.unify(&lhs, &e2u(&rhs)).unwrap();
        assert_eq!(s.ground_meta(e, &Expr::con(D)), Expr::app(Expr::con(C), Expr::bnd(0)));
    }

    #[test]
    fn resolve_chain() {
        let mut s = MetaStore::new();
        let a = s.fresh_meta(0);
        let b = s.fresh_meta(0);
        s.unify(&UTerm::Meta(a), &UTerm::app(UTerm::Con(C), UTerm::Meta(b)))
            .unwrap();
        s.unify(&UTerm::Meta(b), &UTerm::Con(D)).unwrap();
        let r = s.resolve(&UTerm::Meta(a));
        assert_eq!(r, UTerm::app(UTerm::Con(C), UTerm::Con(D)));
        assert_eq!(s.resolve(&r), r);
        let g = UTerm::Con(C);
        assert_eq!(s.resolve(&g), g);
    }

    #[test]
    fn arity0_rejects_dangling() {
        // lam x. ?m = lam x. x has no solution
        let mut s = MetaStore::new();
        let m = s.fresh_meta(0);
        let r = s.unify(&UTerm::abs(UTerm::Meta(m)), &UTerm::abs(UTerm::Bnd(0)));
        assert_eq!(r, Err(UnifyError::Clash));
    }

    #[test]
    fn undo_restores_everything() {
        let mut s = MetaStore::new();
        let m = s.fresh_meta(0);
        let mark = s.mark();
        s.fresh_eigen();
        let n = s.fresh_meta(0);
        s.unify(&UTerm::Meta(m), &UTerm::Meta(n)).unwrap();
        s.undo(mark);
        assert_eq!(s.meta_count(), 1);
        assert_eq!(s.eigen_counter(), 0);
        assert!(s.binding(m).is_none());
    }
}
