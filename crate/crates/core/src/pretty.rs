//! Readable forms of terms, atoms and goals for traces and answers.
//!
//! A term prints as a type, an instruction, a continuation frame or a
//! Mini-ML expression, whichever reading fits first. Free `VAR k` prints
//! as `vk`. Anything else falls back to the de Bruijn form.

use crate::contmach::Instr;
use crate::formula::{Atom, Goal};
use crate::miniml::{self, Tp};
use crate::syntax::Expr;

pub fn term(e: &Expr) -> String {
    if let Some(t) = Tp::from_expr(e) {
        return t.to_string();
    }
    if let Some(i) = Instr::from_expr(e) {
        return i.to_string();
    }
    if let Some(s) = miniml::show(e) {
        return s;
    }
    if let Expr::Abs(b, _) = e {
        // a frame: open its hole with a fresh variable
        let k = e.max_var().map_or(0, |m| m + 1);
        if let Ok(body) =
            crate::syntax::instantiate(&crate::syntax::Abstraction::from_body((**b).clone()), &Expr::var(k))
        {
            if let Some(i) = Instr::from_expr(&body) {
                return format!("lam v{k}. {i}");
            }
        }
    }
    format!("{e:?}")
}

/// Like [`term`], in parentheses unless it is a single token.
pub fn paren_term(e: &Expr) -> String {
    let s = term(e);
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

pub fn atom(a: &Atom<Expr>) -> String {
    let args: Vec<String> = a.args.iter().map(term).collect();
    format!("{}({})", a.pred, args.join(", "))
}

pub fn goal(g: &Goal<Expr>) -> String {
    match g {
        Goal::Tt => "tt".into(),
        Goal::At(a) => atom(a),
        Goal::And(a, b) => format!("{} and {}", sub(a), goal(b)),
        Goal::Imp(a, h) => format!("{} imp {}", atom(a), goal(h)),
        Goal::OrdImp(a, h) => format!("{} ->> {}", atom(a), goal(h)),
        Goal::All(h) => {
            let k = g.max_var().map_or(0, |m| m + 1);
            format!("all v{k}. {}", goal(&h.open(&Expr::var(k))))
        }
    }
}

fn sub(g: &Goal<Expr>) -> String {
    match g {
        Goal::Tt | Goal::At(_) => goal(g),
        _ => format!("({})", goal(g)),
    }
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::miniml::{parse, Tp};

    #[test]
    fn readings() {
        let ii = Tp::arrow(Tp::Base, Tp::Base);
        assert_eq!(term(&Tp::arrow(ii.clone(), ii).to_expr()), "(i -> i) -> i -> i");
        assert_eq!(term(&parse("fun x. x").unwrap()), "fun x. x");
        let i = Instr::App1(parse("fun x. x").unwrap(), parse("fun y. y").unwrap());
        assert_eq!(term(&i.to_expr()), "app1 (fun x. x) (fun y. y)");
        let frame = Expr::abs(Instr::App1(Expr::bnd(0), parse("fun y. y").unwrap()).to_expr());
        assert_eq!(term(&frame), "lam v0. app1 v0 (fun y. y)");
        assert_eq!(term(&Expr::bnd(3)), "BND 3");
    }

    #[test]
    fn goals() {
        let a = Atom::new("hastype", vec![Expr::bnd(0), Tp::Base.to_expr()]);
        let g = Goal::all(Goal::imp(a.clone(), Goal::At(a)));
        assert_eq!(goal(&g), "all v0. hastype(v0, i) imp hastype(v0, i)");
    }
}
