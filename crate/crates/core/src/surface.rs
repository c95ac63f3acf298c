//! Named surface syntax, the encode/decode pair and named substitution.
//!
//! An [`OLSignature`] says which constants are binders, which are binary
//! operators and which are plain constants, together with the concrete
//! keyword used for each in the term grammar.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::syntax::{abstract_var, instantiate, proper, Abstraction, ConstId, Expr, NameHint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Nullary,
    Binary,
    Binder,
}

#[derive(Clone, Debug)]
pub struct SigEntry {
    pub c: ConstId,
    pub arity: Arity,
    /// Binder keyword, infix symbol, or constant name.
    pub keyword: &'static str,
}

#[derive(Clone, Debug)]
pub struct OLSignature {
    pub ol: &'static str,
    pub entries: Vec<SigEntry>,
    /// Bare `ABS` and `APP` encode a native binder and application.
    pub native: bool,
}

impl OLSignature {
    pub fn arity(&self, c: ConstId) -> Option<Arity> {
        self.entries.iter().find(|e| e.c == c).map(|e| e.arity)
    }

    pub fn keyword(&self, c: ConstId) -> Option<&'static str> {
        self.entries.iter().find(|e| e.c == c).map(|e| e.keyword)
    }

    fn by_keyword(&self, kw: &str, arity: Arity) -> Option<ConstId> {
        self.entries
            .iter()
            .find(|e| e.keyword == kw && e.arity == arity)
            .map(|e| e.c)
    }

    fn is_keyword(&self, s: &str) -> bool {
        self.entries.iter().any(|e| e.keyword == s)
    }

    /// The untyped lambda calculus: no constants, bare binder and application.
    pub fn lambda_calculus() -> Self {
        OLSignature {
            ol: "lambda",
            entries: vec![],
            native: true,
        }
    }

    fn check(&self, op: Option<ConstId>, want: Arity) -> Result<(), Error> {
        match op {
            None if self.native && want != Arity::Nullary => Ok(()),
            None => Err(Error::SignatureMismatch(format!(
                "bare {want:?} is not part of `{}`",
                self.ol
            ))),
            Some(c) if self.arity(c) == Some(want) => Ok(()),
            Some(c) => Err(Error::SignatureMismatch(format!(
                "{c:?} is not a {want:?} constant of `{}`",
                self.ol
            ))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NamedTerm {
    Var(String),
    Const(ConstId),
    /// `op = None` is the native binder of a signature with `native` set.
    Binder {
        op: Option<ConstId>,
        bound: String,
        body: Box<NamedTerm>,
    },
    App2 {
        op: Option<ConstId>,
        left: Box<NamedTerm>,
        right: Box<NamedTerm>,
    },
}

impl NamedTerm {
    pub fn var(x: &str) -> Self {
        NamedTerm::Var(x.to_string())
    }

    pub fn binder(op: Option<ConstId>, bound: &str, body: NamedTerm) -> Self {
        NamedTerm::Binder {
            op,
            bound: bound.to_string(),
            body: Box::new(body),
        }
    }

    pub fn app2(op: Option<ConstId>, left: NamedTerm, right: NamedTerm) -> Self {
        NamedTerm::App2 {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut vec![], &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            NamedTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            NamedTerm::Const(_) => {}
            NamedTerm::Binder { bound: y, body, .. } => {
                bound.push(y.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            NamedTerm::App2 { left, right, .. } => {
                left.collect_free(bound, out);
                right.collect_free(bound, out);
            }
        }
    }
}

/// Ordered list of distinct names; position `k` is `VAR k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarContext(Vec<String>);

impl VarContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, Error> {
        let mut out: Vec<String> = vec![];
        for n in names {
            let n = n.as_ref().to_string();
            if out.contains(&n) {
                return Err(Error::DuplicateName(n));
            }
            out.push(n);
        }
        Ok(VarContext(out))
    }

    pub fn empty() -> Self {
        VarContext(vec![])
    }

    /// `prefix0, prefix1, ...` up to `n` names.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        VarContext((0..n).map(|k| format!("{prefix}{k}")).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl OLSignature {
    pub fn encode(&self, ctx: &VarContext, t: &NamedTerm) -> Result<Expr, Error> {
        let mut names = ctx.0.clone();
        self.encode_in(&mut names, t)
    }

    fn encode_in(&self, names: &mut Vec<String>, t: &NamedTerm) -> Result<Expr, Error> {
        Ok(match t {
            NamedTerm::Var(x) => match names.iter().rposition(|n| n == x) {
                Some(k) => Expr::var(k as u32),
                None => return Err(Error::UnboundName(x.clone())),
            },
            NamedTerm::Const(c) => {
                self.check(Some(*c), Arity::Nullary)?;
                Expr::con(*c)
            }
            NamedTerm::Binder { op, bound, body } => {
                self.check(*op, Arity::Binder)?;
                let k = u32::try_from(names.len()).map_err(|_| Error::IndexOverflow)?;
                names.push(bound.clone());
                let b = self.encode_in(names, body);
                names.pop();
                let a = abstract_var(&b?, k);
                let lam = Expr::abs_named(a.body, NameHint::named(bound));
                match op {
                    Some(c) => Expr::app(Expr::con(*c), lam),
                    None => lam,
                }
            }
            NamedTerm::App2 { op, left, right } => {
                self.check(*op, Arity::Binary)?;
                let l = self.encode_in(names, left)?;
                let r = self.encode_in(names, right)?;
                match op {
                    Some(c) => Expr::app(Expr::app(Expr::con(*c), l), r),
                    None => Expr::app(l, r),
                }
            }
        })
    }

    /// Partial inverse of [`encode`](Self::encode); bound names are `x0, x1, ...`.
    pub fn decode(&self, ctx: &VarContext, e: &Expr) -> Option<NamedTerm> {
        self.decode_with(ctx, e, false)
    }

    /// Like `decode`, but reuses the binder names remembered in the term
    /// when they cannot capture. Unnamed binders get `x, y, z, u, w` first.
    pub fn decode_hinted(&self, ctx: &VarContext, e: &Expr) -> Option<NamedTerm> {
        self.decode_with(ctx, e, true)
    }

    fn decode_with(&self, ctx: &VarContext, e: &Expr, hints: bool) -> Option<NamedTerm> {
        if !proper(e) {
            return None;
        }
        let base = (ctx.len() as u32).max(e.max_var().map_or(0, |m| m + 1));
        let mut d = Decoder {
            sig: self,
            ctx: &ctx.0,
            base,
            binders: vec![],
            hints,
        };
        d.go(e)
    }

    pub fn alpha_eq(&self, ctx: &VarContext, a: &NamedTerm, b: &NamedTerm) -> bool {
        match (self.encode(ctx, a), self.encode(ctx, b)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        }
    }
}

struct Decoder<'a> {
    sig: &'a OLSignature,
    ctx: &'a [String],
    /// Binder variables are opened at `VAR(base + depth)`.
    base: u32,
    binders: Vec<String>,
    hints: bool,
}

impl Decoder<'_> {
    fn in_scope(&self, n: &str) -> bool {
        self.ctx.iter().any(|c| c == n) || self.binders.iter().any(|b| b == n)
    }

    fn pick_name(&self, hint: &NameHint) -> String {
        if self.hints {
            if let Some(h) = hint.get() {
                if !self.in_scope(h) && !self.sig.is_keyword(h) {
                    return h.to_string();
                }
            }
            if let Some(n) = ["x", "y", "z", "u", "w"].iter().find(|n| !self.in_scope(n)) {
                return n.to_string();
            }
        }
        (0..).map(|i| format!("x{i}")).find(|n| !self.in_scope(n)).unwrap()
    }

    fn open(&mut self, body: &Expr, hint: &NameHint) -> Option<NamedTerm> {
        let name = self.pick_name(hint);
        let k = self.base + self.binders.len() as u32;
        let opened = instantiate(&Abstraction::from_body(body.clone()), &Expr::var(k)).ok()?;
        self.binders.push(name.clone());
        let out = self.go(&opened);
        self.binders.pop();
        Some(NamedTerm::Binder {
            op: None,
            bound: name,
            body: Box::new(out?),
        })
    }

    fn go(&mut self, e: &Expr) -> Option<NamedTerm> {
        match e {
            Expr::Var(k) if *k >= self.base => {
                let i = (*k - self.base) as usize;
                self.binders.get(i).map(|n| NamedTerm::Var(n.clone()))
            }
            Expr::Var(k) => self.ctx.get(*k as usize).map(|n| NamedTerm::Var(n.clone())),
            Expr::Con(c) if self.sig.arity(*c) == Some(Arity::Nullary) => Some(NamedTerm::Const(*c)),
            Expr::App(f, a) => {
                if let (Expr::Con(c), Expr::Abs(b, h)) = (&**f, &**a) {
                    if self.sig.arity(*c) == Some(Arity::Binder) {
                        let mut t = self.open(b, h)?;
                        if let NamedTerm::Binder { op, .. } = &mut t {
                            *op = Some(*c);
                        }
                        return Some(t);
                    }
                }
                if let Expr::App(g, l) = &**f {
                    if let Expr::Con(c) = &**g {
                        if self.sig.arity(*c) == Some(Arity::Binary) {
                            let l = self.go(l)?;
                            let r = self.go(a)?;
                            return Some(NamedTerm::app2(Some(*c), l, r));
                        }
                    }
                }
                if self.sig.native {
                    let l = self.go(f)?;
                    let r = self.go(a)?;
                    return Some(NamedTerm::app2(None, l, r));
                }
                None
            }
            Expr::Abs(b, h) if self.sig.native => self.open(b, h),
            _ => None,
        }
    }
}

/// Capture-avoiding substitution `t[s/x]`.
pub fn subst_named(t: &NamedTerm, x: &str, s: &NamedTerm) -> NamedTerm {
    match t {
        NamedTerm::Var(y) if y == x => s.clone(),
        NamedTerm::Var(_) | NamedTerm::Const(_) => t.clone(),
        NamedTerm::Binder { op, bound, body } => {
            if bound == x {
                return t.clone();
            }
            let fv_s = s.free_names();
            let fv_b = body.free_names();
            if fv_s.contains(bound) && fv_b.contains(x) {
                let fresh = (0..)
                    .map(|i| format!("{bound}{i}"))
                    .find(|n| !fv_s.contains(n) && !fv_b.contains(n) && n != x)
                    .unwrap();
                let renamed = subst_named(body, bound, &NamedTerm::Var(fresh.clone()));
                NamedTerm::Binder {
                    op: *op,
                    bound: fresh,
                    body: Box::new(subst_named(&renamed, x, s)),
                }
            } else {
                NamedTerm::Binder {
                    op: *op,
                    bound: bound.clone(),
                    body: Box::new(subst_named(body, x, s)),
                }
            }
        }
        NamedTerm::App2 { op, left, right } => NamedTerm::App2 {
            op: *op,
            left: Box::new(subst_named(left, x, s)),
            right: Box::new(subst_named(right, x, s)),
        },
    }
}

/// Printer for named terms in the concrete grammar of a signature.
pub struct Show<'a> {
    pub sig: &'a OLSignature,
    pub term: &'a NamedTerm,
}

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.sig, self.term, Ctx::Top)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    Left,
    Right,
}

fn write_term(f: &mut fmt::Formatter<'_>, sig: &OLSignature, t: &NamedTerm, at: Ctx) -> fmt::Result {
    match t {
        NamedTerm::Var(x) => f.write_str(x),
        NamedTerm::Const(c) => f.write_str(sig.keyword(*c).unwrap_or(c.name)),
        NamedTerm::Binder { op, bound, body } => {
            let kw = op.and_then(|c| sig.keyword(c)).unwrap_or("lam");
            if at != Ctx::Top {
                f.write_str("(")?;
            }
            write!(f, "{kw} {bound}. ")?;
            write_term(f, sig, body, Ctx::Top)?;
            if at != Ctx::Top {
                f.write_str(")")?;
            }
            Ok(())
        }
        NamedTerm::App2 { op, left, right } => {
            if at == Ctx::Right {
                f.write_str("(")?;
            }
            write_term(f, sig, left, Ctx::Left)?;
            match op.and_then(|c| sig.keyword(c)) {
                Some(kw) => write!(f, " {kw} ")?,
                None => f.write_str(" ")?,
            }
            write_term(f, sig, right, Ctx::Right)?;
            if at == Ctx::Right {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Sym(&'static str),
}

/// Tokens with their byte offsets.
pub fn lex(src: &str) -> Result<Vec<(Tok, usize)>, Error> {
    const SYMS: [&str; 8] = ["->>", "->", ".", ",", "(", ")", "@", ";"];
    let mut out = vec![];
    let mut i = 0;
    let bytes = src.as_bytes();
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() {
                let c = bytes[i] as char;
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        for s in SYMS {
            if src[i..].starts_with(s) {
                out.push((Tok::Sym(s), i));
                i += s.len();
                continue 'outer;
            }
        }
        return Err(Error::Parse {
            pos: i,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

/// Cursor over a token stream, shared by the term, type and goal parsers.
pub struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, Error> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    pub fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    pub fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    pub fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == w)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), Error> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{s}`")))
        }
    }

    pub fn ident(&mut self) -> Result<String, Error> {
        match self.peek() {
            Some(Tok::Ident(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    pub fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn finish(&self) -> Result<(), Error> {
        if self.is_done() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }

    /// `Term ::= ident | binder ident "." Term | Term op Term | "(" Term ")"`.
    pub fn term(&mut self, sig: &OLSignature) -> Result<NamedTerm, Error> {
        if let Some(t) = self.binder(sig)? {
            return Ok(t);
        }
        let mut left = self.atom(sig)?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(s)) => sig.by_keyword(s, Arity::Binary),
                Some(Tok::Ident(s)) => sig.by_keyword(s, Arity::Binary),
                None => None,
            };
            let Some(op) = op else { break };
            self.pos += 1;
            let right = match self.binder(sig)? {
                Some(t) => t,
                None => self.atom(sig)?,
            };
            left = NamedTerm::app2(Some(op), left, right);
        }
        Ok(left)
    }

    fn binder(&mut self, sig: &OLSignature) -> Result<Option<NamedTerm>, Error> {
        let op = match self.peek() {
            Some(Tok::Ident(s)) => sig.by_keyword(s, Arity::Binder),
            _ => None,
        };
        let Some(op) = op else { return Ok(None) };
        self.pos += 1;
        let x = self.ident()?;
        if sig.is_keyword(&x) {
            return Err(self.error("binder name is a keyword"));
        }
        self.expect_sym(".")?;
        let body = self.term(sig)?;
        Ok(Some(NamedTerm::binder(Some(op), &x, body)))
    }

    /// An identifier, a nullary constant or a parenthesized term.
    pub fn atom(&mut self, sig: &OLSignature) -> Result<NamedTerm, Error> {
        if self.eat_sym("(") {
            let t = self.term(sig)?;
            self.expect_sym(")")?;
            return Ok(t);
        }
        match self.peek() {
            Some(Tok::Ident(x)) => {
                if let Some(c) = sig.by_keyword(x, Arity::Nullary) {
                    self.pos += 1;
                    return Ok(NamedTerm::Const(c));
                }
                if sig.is_keyword(x) {
                    return Err(self.error(&format!("unexpected keyword `{x}`")));
                }
                let x = x.clone();
                self.pos += 1;
                Ok(NamedTerm::Var(x))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// Parses a whole string as one term.
pub fn parse_term(sig: &OLSignature, src: &str) -> Result<NamedTerm, Error> {
    let mut p = Parser::new(src)?;
    let t = p.term(sig)?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod test {
    use super::*;

    const LAM: Option<ConstId> = None;

    #[test]
    fn golden_lambda_expansion() {
        // lam v1. (lam v2. v1 v2) v1 v3, with v3 free at index 3
        let sig = OLSignature::lambda_calculus();
        let ctx = VarContext::new(&["u0", "u1", "u2", "v3"]).unwrap();
        let inner = NamedTerm::binder(
            LAM,
            "v2",
            NamedTerm::app2(LAM, NamedTerm::var("v1"), NamedTerm::var("v2")),
        );
        let t = NamedTerm::binder(
            LAM,
            "v1",
            NamedTerm::app2(
                LAM,
                NamedTerm::app2(LAM, inner, NamedTerm::var("v1")),
                NamedTerm::var("v3"),
            ),
        );
        let e = sig.encode(&ctx, &t).unwrap();
        let b = Expr::bnd;
        let want = Expr::abs(Expr::app(
            Expr::app(Expr::abs(Expr::app(b(1), b(0))), b(0)),
            Expr::var(3),
        ));
        assert_eq!(e, want);
        let back = sig.decode(&ctx, &e).unwrap();
        assert!(sig.alpha_eq(&ctx, &back, &t));
    }

    #[test]
    fn duplicate_context_names() {
        assert!(VarContext::new(&["x", "x"]).is_err());
    }

    #[test]
    fn shadowing_uses_innermost() {
        let sig = OLSignature::lambda_calculus();
        let t = NamedTerm::binder(LAM, "x", NamedTerm::binder(LAM, "x", NamedTerm::var("x")));
        let e = sig.encode(&VarContext::empty(), &t).unwrap();
        assert_eq!(e, Expr::abs(Expr::abs(Expr::bnd(0))));
    }

    #[test]
    fn lex_symbols() {
        let toks: Vec<Tok> = lex("a ->> b -> (c)").unwrap().into_iter().map(|t| t.0).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("a".into()),
                Tok::Sym("->>"),
                Tok::Ident("b".into()),
                Tok::Sym("->"),
                Tok::Sym("("),
                Tok::Ident("c".into()),
                Tok::Sym(")"),
            ]
        );
        assert!(lex("a $ b").is_err());
    }
}
