//! Text queries for the two bundled object logics.
//!
//! ```text
//! Query ::= "exists" X ("," X)* "." Goal | Goal
//! Goal  ::= "all" x "." Goal | Unit ("and" Goal)?
//! Unit  ::= "tt" | "(" Goal ")" | Atom (("imp" | "->>") Goal)?
//! ```
//!
//! Existential names become metavariables; they may stand for terms or
//! types. Names bound by `all` are goal-level binders.

use crate::error::Error;
use crate::formula::{Atom, Goal};
use crate::miniml::{self, TP_ARROW, TP_I};
use crate::surface::{NamedTerm, Parser};
use crate::syntax::{Expr, NameHint};
use crate::unify::{MetaId, MetaStore, UTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ol {
    MiniMl,
    ContMach,
}

impl Ol {
    pub fn preds(self) -> &'static [&'static str] {
        match self {
            Ol::MiniMl => &["isterm", "eval", "hastype"],
            Ol::ContMach => &["ceval", "exec", "init", "of", "ofI", "ofK"],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Query {
    pub goal: Goal<UTerm>,
    pub store: MetaStore,
    pub vars: Vec<(String, MetaId)>,
}

impl Query {
    /// `NAME = value` for each existential, after a search left `store`.
    pub fn answer(&self, store: &MetaStore, default: &Expr) -> Vec<(String, String)> {
        self.vars
            .iter()
            .map(|(n, m)| (n.clone(), crate::pretty::term(&store.ground(&UTerm::Meta(*m), default))))
            .collect()
    }
}

struct Env {
    metas: Vec<(String, MetaId)>,
    alls: Vec<String>,
}

pub fn parse_query(ol: Ol, src: &str) -> Result<Query, Error> {
    let mut p = Parser::new(src)?;
    let mut store = MetaStore::new();
    let mut env = Env {
        metas: vec![],
        alls: vec![],
    };
    if p.eat_word("exists") {
        loop {
            let x = p.ident()?;
            if env.metas.iter().any(|(n, _)| *n == x) {
                return Err(Error::DuplicateName(x));
            }
            env.metas.push((x, store.fresh_meta(0)));
            if !p.eat_sym(",") {
                break;
            }
        }
        p.expect_sym(".")?;
    }
    let goal = goal(&mut p, ol, &mut env)?;
    p.finish()?;
    Ok(Query {
        goal,
        store,
        vars: env.metas,
    })
}

fn goal(p: &mut Parser, ol: Ol, env: &mut Env) -> Result<Goal<UTerm>, Error> {
    if p.eat_word("all") {
        let x = p.ident()?;
        p.expect_sym(".")?;
        env.alls.push(x);
        let g = goal(p, ol, env);
        env.alls.pop();
        return Ok(Goal::all(g?));
    }
    if p.at_word("exists") {
        return Err(p.error("`exists` is only allowed at the top"));
    }
    let u = unit(p, ol, env)?;
    if p.eat_word("and") {
        return Ok(Goal::and(u, goal(p, ol, env)?));
    }
    Ok(u)
}

fn unit(p: &mut Parser, ol: Ol, env: &mut Env) -> Result<Goal<UTerm>, Error> {
    if p.eat_word("tt") {
        return Ok(Goal::Tt);
    }
    if p.eat_sym("(") {
        let g = goal(p, ol, env)?;
        p.expect_sym(")")?;
        return Ok(g);
    }
    let a = atom(p, ol, env)?;
    if p.eat_word("imp") {
        return Ok(Goal::imp(a, goal(p, ol, env)?));
    }
    if p.eat_sym("->>") {
        return Ok(Goal::ord_imp(a, goal(p, ol, env)?));
    }
    Ok(Goal::At(a))
}

enum Arg {
    Term,
    Type,
    Instr,
}

fn atom(p: &mut Parser, ol: Ol, env: &Env) -> Result<Atom<UTerm>, Error> {
    let name = p.ident()?;
    let Some(&pred) = ol.preds().iter().find(|q| **q == name) else {
        return Err(p.error(&format!("unknown predicate `{name}`")));
    };
    let shape: &[Arg] = match pred {
        "isterm" | "init" => &[Arg::Term],
        "eval" | "ceval" => &[Arg::Term, Arg::Term],
        "hastype" | "of" => &[Arg::Term, Arg::Type],
        "exec" => &[Arg::Instr],
        "ofI" => &[Arg::Instr, Arg::Type],
        _ => &[Arg::Type],
    };
    p.expect_sym("(")?;
    let mut args = vec![];
    for (i, a) in shape.iter().enumerate() {
        if i > 0 {
            p.expect_sym(",")?;
        }
        args.push(match a {
            Arg::Term => term(p, env)?,
            Arg::Type => ty(p, env)?,
            Arg::Instr => instr(p, env)?,
        });
    }
    p.expect_sym(")")?;
    Ok(Atom::new(pred, args))
}

fn term(p: &mut Parser, env: &Env) -> Result<UTerm, Error> {
    let t = p.term(&miniml::signature())?;
    convert(&t, &mut vec![], env)
}

fn convert(t: &NamedTerm, binders: &mut Vec<String>, env: &Env) -> Result<UTerm, Error> {
    Ok(match t {
        NamedTerm::Var(x) => lookup(x, binders.len() as u32, binders, env)?,
        NamedTerm::Const(c) => UTerm::Con(*c),
        NamedTerm::Binder { op, bound, body } => {
            binders.push(bound.clone());
            let b = convert(body, binders, env);
            binders.pop();
            let lam = UTerm::Abs(std::sync::Arc::new(b?), NameHint::named(bound));
            match op {
                Some(c) => UTerm::app(UTerm::Con(*c), lam),
                None => lam,
            }
        }
        NamedTerm::App2 { op, left, right } => {
            let l = convert(left, binders, env)?;
            let r = convert(right, binders, env)?;
            match op {
                Some(c) => UTerm::app(UTerm::app(UTerm::Con(*c), l), r),
                None => UTerm::app(l, r),
            }
        }
    })
}

/// `depth` term binders sit between the occurrence and the goal level.
fn lookup(x: &str, depth: u32, binders: &[String], env: &Env) -> Result<UTerm, Error> {
    if let Some(i) = binders.iter().rposition(|b| b == x) {
        return Ok(UTerm::Bnd((binders.len() - 1 - i) as u32));
    }
    if let Some(j) = env.alls.iter().rposition(|b| b == x) {
        return Ok(UTerm::Bnd(depth + (env.alls.len() - 1 - j) as u32));
    }
    if let Some((_, m)) = env.metas.iter().find(|(n, _)| n == x) {
        return Ok(UTerm::Meta(*m));
    }
    Err(Error::UnboundName(x.to_string()))
}

/// `Ty ::= "i" | X | "(" Ty ")" | Ty "->" Ty`, arrows to the right.
fn ty(p: &mut Parser, env: &Env) -> Result<UTerm, Error> {
    let left = if p.eat_sym("(") {
        let t = ty(p, env)?;
        p.expect_sym(")")?;
        t
    } else if p.eat_word("i") {
        UTerm::Con(TP_I)
    } else {
        let x = p.ident()?;
        lookup(&x, 0, &[], env)?
    };
    if p.eat_sym("->") {
        let right = ty(p, env)?;
        return Ok(UTerm::app(UTerm::app(UTerm::Con(TP_ARROW), left), right));
    }
    Ok(left)
}

/// `ev t | return t | app1 t t`, the first operand of `app1` an atom.
fn instr(p: &mut Parser, env: &Env) -> Result<UTerm, Error> {
    use crate::contmach::{APP1, EV, RETURN};
    let sig = miniml::signature();
    if p.eat_word("ev") {
        return Ok(UTerm::app(UTerm::Con(EV), term(p, env)?));
    }
    if p.eat_word("return") {
        return Ok(UTerm::app(UTerm::Con(RETURN), term(p, env)?));
    }
    if p.eat_word("app1") {
        let v = convert(&p.atom(&sig)?, &mut vec![], env)?;
        let e = term(p, env)?;
        return Ok(UTerm::app(UTerm::app(UTerm::Con(APP1), v), e));
    }
    Err(p.error("expected an instruction"))
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::miniml::{parse, Tp};

    #[test]
    fn hastype_query() {
        let q = parse_query(Ol::MiniMl, "exists T. hastype(fun x. fun y. x @ y, T)").unwrap();
        assert_eq!(q.vars.len(), 1);
        let Goal::At(a) = &q.goal else { panic!() };
        assert_eq!(a.args[0].to_expr(), Some(parse("fun x. fun y. x @ y").unwrap()));
        assert_eq!(a.args[1], UTerm::Meta(q.vars[0].1));
    }

    #[test]
    fn types_and_connectives() {
        let q = parse_query(
            Ol::MiniMl,
            "all x. hastype(x, i -> i) imp hastype(x, (i -> i) -> i) and tt",
        )
        .unwrap();
        let Goal::All(b) = &q.goal else { panic!() };
        let Goal::Imp(a, g) = &**b else { panic!() };
        assert_eq!(a.args[0], UTerm::Bnd(0));
        assert_eq!(a.args[1].to_expr(), Some(Tp::arrow(Tp::Base, Tp::Base).to_expr()));
        assert!(matches!(&**g, Goal::And(..)));
    }

    #[test]
    fn all_var_under_term_binder() {
        let q = parse_query(Ol::MiniMl, "all y. isterm(fun x. x @ y)").unwrap();
        let Goal::All(b) = &q.goal else { panic!() };
        let Goal::At(a) = &**b else { panic!() };
        let opened = Goal::At(a.clone()).open(&UTerm::Var(5));
        let Goal::At(a) = opened else { panic!() };
        let want = miniml::fun(miniml::app(Expr::bnd(0), Expr::var(5)));
        assert_eq!(a.args[0].to_expr(), Some(want));
    }

    #[test]
    fn contmach_atoms() {
        let q = parse_query(Ol::ContMach, "exists V. init(V) ->> exec(app1 (fun x. x) fun y. y)").unwrap();
        assert!(matches!(q.goal, Goal::OrdImp(..)));
        assert!(parse_query(Ol::ContMach, "ofK(i -> i)").is_ok());
        assert!(parse_query(Ol::MiniMl, "ceval(fun x. x, fun x. x)").is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_query(Ol::MiniMl, "isterm(y)"),
            Err(Error::UnboundName(_))
        ));
        assert!(parse_query(Ol::MiniMl, "tt and exists X. isterm(X)").is_err());
        assert!(matches!(
            parse_query(Ol::MiniMl, "exists X, X. tt"),
            Err(Error::DuplicateName(_))
        ));
        assert!(parse_query(Ol::MiniMl, "isterm(fun x. x) junk").is_err());
    }
}
