//! De Bruijn expressions, the level/proper predicates and the defined binder.
//!
//! Free variables are `Var(n)`, bound variables are `Bnd(j)`. An
//! [`Abstraction`] is a body with one hole: at ABS-depth `d` the hole is the
//! dangling index `Bnd(d)`.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// A constant of some object logic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstId {
    pub ol: &'static str,
    pub name: &'static str,
}

impl ConstId {
    pub const fn new(ol: &'static str, name: &'static str) -> Self {
        ConstId { ol, name }
    }
}

impl fmt::Debug for ConstId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

/// Binder name carried along for printing only.
///
/// Every hint compares equal to every other, so `Expr` equality stays
/// plain tree equality.
#[derive(Clone, Default)]
pub struct NameHint(pub Option<Arc<str>>);

impl NameHint {
    pub fn none() -> Self {
        NameHint(None)
    }

    pub fn named(s: &str) -> Self {
        NameHint(Some(Arc::from(s)))
    }

    pub fn get(&self) -> Option<&str> {
        self.0.as_deref()
    }
}

impl PartialEq for NameHint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for NameHint {}
impl PartialOrd for NameHint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for NameHint {
    fn cmp(&self, _: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}
impl std::hash::Hash for NameHint {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}
impl fmt::Debug for NameHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(s) => write!(f, "{s:?}"),
            None => f.write_str("_"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Con(ConstId),
    Var(u32),
    Bnd(u32),
    App(Arc<Expr>, Arc<Expr>),
    Abs(Arc<Expr>, NameHint),
}

impl Expr {
    pub fn con(c: ConstId) -> Expr {
        Expr::Con(c)
    }

    pub fn var(n: u32) -> Expr {
        Expr::Var(n)
    }

    pub fn bnd(j: u32) -> Expr {
        Expr::Bnd(j)
    }

    pub fn app(l: Expr, r: Expr) -> Expr {
        Expr::App(Arc::new(l), Arc::new(r))
    }

    pub fn abs(body: Expr) -> Expr {
        Expr::Abs(Arc::new(body), NameHint::none())
    }

    pub fn abs_named(body: Expr, hint: NameHint) -> Expr {
        Expr::Abs(Arc::new(body), hint)
    }

    /// Largest free variable index, if any.
    pub fn max_var(&self) -> Option<u32> {
        match self {
            Expr::Var(n) => Some(*n),
            Expr::Con(_) | Expr::Bnd(_) => None,
            Expr::App(l, r) => l.max_var().max(r.max_var()),
            Expr::Abs(b, _) => b.max_var(),
        }
    }

    pub fn has_var(&self, k: u32) -> bool {
        match self {
            Expr::Var(n) => *n == k,
            Expr::Con(_) | Expr::Bnd(_) => false,
            Expr::App(l, r) => l.has_var(k) || r.has_var(k),
            Expr::Abs(b, _) => b.has_var(k),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Con(c) => write!(f, "CON {c:?}"),
            Expr::Var(n) => write!(f, "VAR {n}"),
            Expr::Bnd(j) => write!(f, "BND {j}"),
            Expr::App(l, r) => write!(f, "APP({l:?}, {r:?})"),
            Expr::Abs(b, _) => write!(f, "ABS({b:?})"),
        }
    }
}

/// Number of nodes.
pub fn size(e: &Expr) -> usize {
    match e {
        Expr::Con(_) | Expr::Var(_) | Expr::Bnd(_) => 1,
        Expr::App(l, r) => 1 + size(l) + size(r),
        Expr::Abs(b, _) => 1 + size(b),
    }
}

/// True iff `e` has no dangling index once wrapped in `i` ABS nodes.
pub fn level(i: u32, e: &Expr) -> bool {
    match e {
        Expr::Con(_) | Expr::Var(_) => true,
        Expr::Bnd(j) => *j < i,
        Expr::App(l, r) => level(i, l) && level(i, r),
        Expr::Abs(b, _) => level(i + 1, b),
    }
}

pub fn proper(e: &Expr) -> bool {
    level(0, e)
}

/// A one-hole body standing for an `expr -> expr` function.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Abstraction {
    pub body: Expr,
}

impl Abstraction {
    /// Wraps a body without checking it; see [`abstr`].
    pub fn from_body(body: Expr) -> Self {
        Abstraction { body }
    }
}

pub fn abstr(a: &Abstraction) -> bool {
    level(1, &a.body)
}

pub fn lambda(a: &Abstraction) -> Expr {
    Expr::abs(a.body.clone())
}

/// Replaces the hole (index `d` at depth `d`) by `f(d)`.
fn fill_hole(e: &Expr, d: u32, f: &impl Fn(u32) -> Expr) -> Expr {
    match e {
        Expr::Bnd(j) if *j == d => f(d),
        Expr::Con(_) | Expr::Var(_) | Expr::Bnd(_) => e.clone(),
        Expr::App(l, r) => Expr::app(fill_hole(l, d, f), fill_hole(r, d, f)),
        Expr::Abs(b, h) => Expr::abs_named(fill_hole(b, d + 1, f), h.clone()),
    }
}

pub fn lbind(i: u32, a: &Abstraction) -> Result<Expr, Error> {
    fn go(e: &Expr, i: u32, d: u32) -> Result<Expr, Error> {
        Ok(match e {
            Expr::Bnd(j) if *j == d => Expr::Bnd(d.checked_add(i).ok_or(Error::IndexOverflow)?),
            Expr::Con(_) | Expr::Var(_) | Expr::Bnd(_) => e.clone(),
            Expr::App(l, r) => Expr::app(go(l, i, d)?, go(r, i, d)?),
            Expr::Abs(b, h) => Expr::abs_named(go(b, i, d + 1)?, h.clone()),
        })
    }
    if !abstr(a) {
        return Err(Error::InvalidAbstraction);
    }
    go(&a.body, i, 0)
}

/// Peels one ABS off a proper term.
pub fn match_abstraction(e: &Expr) -> Option<Abstraction> {
    match e {
        Expr::Abs(b, _) if proper(e) => Some(Abstraction::from_body((**b).clone())),
        _ => None,
    }
}

/// Meta-level beta reduction: plugs a proper `arg` into the hole.
pub fn instantiate(a: &Abstraction, arg: &Expr) -> Result<Expr, Error> {
    if !abstr(a) {
        return Err(Error::InvalidAbstraction);
    }
    if !proper(arg) {
        return Err(Error::NonProperArgument);
    }
    Ok(fill_hole(&a.body, 0, &|_| arg.clone()))
}

pub fn const_abstraction(t: &Expr) -> Result<Abstraction, Error> {
    if !proper(t) {
        return Err(Error::NonProper);
    }
    Ok(Abstraction::from_body(t.clone()))
}

/// Turns every `Var(k)` into the hole: the inverse of instantiating at `Var(k)`.
pub fn abstract_var(e: &Expr, k: u32) -> Abstraction {
    fn go(e: &Expr, k: u32, d: u32) -> Expr {
        match e {
            Expr::Var(n) if *n == k => Expr::Bnd(d),
            Expr::Con(_) | Expr::Var(_) | Expr::Bnd(_) => e.clone(),
            Expr::App(l, r) => Expr::app(go(l, k, d), go(r, k, d)),
            Expr::Abs(b, h) => Expr::abs_named(go(b, k, d + 1), h.clone()),
        }
    }
    Abstraction::from_body(go(e, k, 0))
}

#[cfg(test)]
mod test {
    use super::*;

    const C: ConstId = ConstId::new("t", "c");

    fn app(l: Expr, r: Expr) -> Expr {
        Expr::app(l, r)
    }
    fn abs(b: Expr) -> Expr {
        Expr::abs(b)
    }
    fn b(j: u32) -> Expr {
        Expr::bnd(j)
    }
    fn v(n: u32) -> Expr {
        Expr::var(n)
    }

    #[test]
    fn sizes() {
        assert_eq!(size(&Expr::con(C)), 1);
        assert_eq!(size(&app(v(0), b(1))), 3);
        assert_eq!(size(&abs(app(b(0), b(1)))), 4);
    }

    #[test]
    fn levels() {
        assert!(level(0, &Expr::con(C)));
        assert!(!level(0, &b(0)));
        assert!(level(1, &b(0)));
        assert!(level(0, &abs(b(0))));
        assert!(proper(&v(3)));
        assert!(!proper(&b(0)));
        assert!(proper(&abs(app(b(0), v(0)))));
    }

    #[test]
    fn abstr_cases() {
        assert!(abstr(&Abstraction::from_body(b(0))));
        assert!(!abstr(&Abstraction::from_body(b(1))));
        assert!(abstr(&Abstraction::from_body(abs(app(b(0), b(1))))));
    }

    #[test]
    fn lambda_cases() {
        let a = Abstraction::from_body(app(b(0), v(3)));
        assert_eq!(lambda(&a), abs(app(b(0), v(3))));
        let a = Abstraction::from_body(abs(app(b(0), b(1))));
        assert_eq!(lambda(&a), abs(abs(app(b(0), b(1)))));
        assert_eq!(lambda(&Abstraction::from_body(Expr::con(C))), abs(Expr::con(C)));
    }

    #[test]
    fn lbind_cases() {
        let a = Abstraction::from_body(abs(app(b(0), b(1))));
        assert_eq!(lbind(0, &a).unwrap(), abs(app(b(0), b(1))));
        assert_eq!(lbind(2, &Abstraction::from_body(b(0))).unwrap(), b(2));
        assert_eq!(lbind(1, &Abstraction::from_body(abs(b(1)))).unwrap(), abs(b(2)));
        assert_eq!(lbind(0, &Abstraction::from_body(b(1))), Err(Error::InvalidAbstraction));
    }

    #[test]
    fn lbind_overflow() {
        let a = Abstraction::from_body(abs(b(1)));
        assert_eq!(lbind(u32::MAX, &a), Err(Error::IndexOverflow));
    }

    #[test]
    fn match_cases() {
        assert_eq!(match_abstraction(&abs(b(0))), Some(Abstraction::from_body(b(0))));
        assert_eq!(match_abstraction(&Expr::con(C)), None);
        assert_eq!(
            match_abstraction(&abs(abs(app(b(1), b(0))))),
            Some(Abstraction::from_body(abs(app(b(1), b(0)))))
        );
        assert_eq!(match_abstraction(&abs(b(1))), None);
    }

    #[test]
    fn instantiate_cases() {
        let id = Abstraction::from_body(b(0));
        assert_eq!(instantiate(&id, &v(7)).unwrap(), v(7));
        let dup = Abstraction::from_body(app(b(0), b(0)));
        assert_eq!(
            instantiate(&dup, &Expr::con(C)).unwrap(),
            app(Expr::con(C), Expr::con(C))
        );
        let a = Abstraction::from_body(abs(app(b(0), b(1))));
        assert_eq!(instantiate(&a, &v(2)).unwrap(), abs(app(b(0), v(2))));
        assert_eq!(instantiate(&id, &b(0)), Err(Error::NonProperArgument));
    }

    #[test]
    fn const_abstraction_cases() {
        for t in [v(0), abs(b(0)), app(Expr::con(C), v(1))] {
            let a = const_abstraction(&t).unwrap();
            assert_eq!(a.body, t);
            assert!(abstr(&a));
            assert_eq!(instantiate(&a, &v(9)).unwrap(), t);
        }
        assert_eq!(const_abstraction(&b(0)), Err(Error::NonProper));
    }

    #[test]
    fn hints_do_not_affect_equality() {
        let x = Expr::abs_named(b(0), NameHint::named("x"));
        let y = Expr::abs_named(b(0), NameHint::named("y"));
        assert_eq!(x, y);
    }

    /// Every term up to `n` nodes over a tiny alphabet.
    fn all_terms(n: usize) -> Vec<Expr> {
        let mut by_size: Vec<Vec<Expr>> = vec![vec![], vec![Expr::con(C), v(0), v(1), b(0), b(1)]];
        for s in 2..=n {
            let mut out = vec![];
            for t in &by_size[s - 1] {
                out.push(abs(t.clone()));
            }
            for ls in 1..s - 1 {
                let rs = s - 1 - ls;
                for l in &by_size[ls] {
                    for r in &by_size[rs] {
                        out.push(app(l.clone(), r.clone()));
                    }
                }
            }
            by_size.push(out);
        }
        by_size.concat()
    }

    #[test]
    fn freeness_exhaustive() {
        let terms = all_terms(4);
        fn head(e: &Expr) -> u8 {
            match e {
                Expr::Con(_) => 0,
                Expr::Var(_) => 1,
                Expr::Bnd(_) => 2,
                Expr::App(..) => 3,
                Expr::Abs(..) => 4,
            }
        }
        for s in &terms {
            for t in &terms {
                if head(s) != head(t) {
                    assert_ne!(s, t);
                }
                if let (Expr::App(a, b2), Expr::App(c, d)) = (s, t) {
                    assert_eq!(s == t, a == c && b2 == d);
                }
                if let (Expr::Abs(a, _), Expr::Abs(c, _)) = (s, t) {
                    assert_eq!(s == t, a == c);
                }
            }
        }
    }
}
