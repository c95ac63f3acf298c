//! The thirteen acceptance criteria, one line each.
//!
//! Run with `cargo test -p hybrid-core --test acceptance -- --nocapture`
//! to see the report lines.

use std::time::{Duration, Instant};

use hybrid::contmach;
use hybrid::formula::Goal;
use hybrid::harness::{self, Limits, Report};
use hybrid::miniml::{self, Tp};
use hybrid::search::{SearchConfig, SearchResult};
use hybrid::sl_hh::{check_hh, solutions_hh};
use hybrid::sl_olli::{check_olli, solutions_olli, QueryOlli};
use hybrid::surface::{NamedTerm, OLSignature, VarContext};
use hybrid::syntax::{lambda, lbind, Abstraction, Expr};
use hybrid::unify::{MetaStore, UTerm};

const SEED: u64 = 2024;

struct Line {
    n: u32,
    name: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

impl Line {
    fn pass(&self) -> bool {
        self.ok && self.elapsed <= self.limit
    }
}

fn run(n: u32, name: &'static str, limit: Duration, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (ok, detail) = f();
    Line {
        n,
        name,
        ok,
        detail,
        elapsed: start.elapsed(),
        limit,
    }
}

fn from_report(r: &Report, want_run: Option<usize>) -> (bool, String) {
    let mut ok = r.ok();
    let mut detail = r.to_string();
    if let Some(n) = want_run {
        if r.run != n {
            ok = false;
            detail.push_str(&format!(" [expected {n} cases]"));
        }
    }
    if !r.ok() {
        detail.push_str(&format!(
            " first: {}",
            r.diagnostics.iter().find(|d| d.starts_with("FAIL")).unwrap()
        ));
    }
    (ok, detail)
}

fn ms(n: u64) -> Duration {
    Duration::from_millis(n)
}

fn secs(n: u64) -> Duration {
    Duration::from_secs(n)
}

fn golden_expansion() -> (bool, String) {
    // lam v1. (lam v2. v1 v2) v1 v3, with v3 free at index 3
    let sig = OLSignature::lambda_calculus();
    let ctx = VarContext::new(&["u0", "u1", "u2", "v3"]).unwrap();
    let app = |l, r| NamedTerm::app2(None, l, r);
    let v = NamedTerm::var;
    let inner = NamedTerm::binder(None, "v2", app(v("v1"), v("v2")));
    let t = NamedTerm::binder(None, "v1", app(app(inner, v("v1")), v("v3")));
    let got = sig.encode(&ctx, &t).unwrap();
    let want = Expr::abs(Expr::app(
        Expr::app(Expr::abs(Expr::app(Expr::bnd(1), Expr::bnd(0))), Expr::bnd(0)),
        Expr::var(3),
    ));
    (got == want, format!("{got:?}"))
}

fn golden_lbind() -> (bool, String) {
    let body = Expr::abs(Expr::app(Expr::bnd(0), Expr::bnd(1)));
    let a = Abstraction::from_body(body.clone());
    let l = lbind(0, &a).unwrap();
    let lam = lambda(&a);
    let ok = l == body && lam == Expr::abs(body);
    (ok, format!("lbind 0 = {l:?}, lambda = {lam:?}"))
}

fn type_of_apply() -> (bool, String) {
    let db = miniml::db_miniml();
    let e = miniml::parse("fun x. fun y. x @ y").unwrap();
    let mut store = MetaStore::new();
    let t = UTerm::Meta(store.fresh_meta(0));
    let goal = Goal::At(miniml::hastype((&e).into(), t.clone()));
    match solutions_hh(&db, &[], &goal, &store, &SearchConfig::dfs(8))
        .unwrap()
        .first()
    {
        SearchResult::Proved(s) => {
            let got = Tp::from_expr(&s.store.ground(&t, &db.default));
            let ii = Tp::arrow(Tp::Base, Tp::Base);
            let want = Tp::arrow(ii.clone(), ii);
            let checked = check_hh(&db, &s.derivation).is_ok();
            (
                got.as_ref() == Some(&want) && checked,
                format!("T = {}", got.map_or("?".into(), |t| t.to_string())),
            )
        }
        other => (false, format!("{:?}", other.is_proved())),
    }
}

fn ceval_of_identity() -> (bool, String) {
    let db = contmach::db_contmach();
    let id = miniml::parse("fun x. x").unwrap();
    for b in 1..=20 {
        let mut store = MetaStore::new();
        let v = UTerm::Meta(store.fresh_meta(0));
        let q = QueryOlli::Goal(Goal::At(contmach::ceval((&id).into(), v.clone())));
        match solutions_olli(&db, &[], &[], &q, &store, &SearchConfig::dfs(b))
            .unwrap()
            .first()
        {
            SearchResult::Proved(s) => {
                let w = s.store.ground(&v, &db.default);
                let ok = w == id && check_olli(&db, &s.derivation).is_ok();
                return (ok, format!("V = {} at bound {b}", hybrid::pretty::term(&w)));
            }
            SearchResult::Failed => {}
            SearchResult::Exhausted => {}
        }
    }
    (false, "not found up to bound 20".into())
}

#[test]
fn acceptance() {
    let mut lines = vec![];
    lines.push(run(1, "golden term expansion", ms(1), golden_expansion));
    lines.push(run(2, "lbind golden case", ms(1), golden_lbind));
    lines.push(run(3, "abstraction equality suite", secs(5), || {
        from_report(&harness::abstraction_suite(SEED, 1000), Some(1000))
    }));
    lines.push(run(4, "adequacy suite", secs(10), || {
        from_report(&harness::adequacy_suite(SEED, 200), Some(200))
    }));
    lines.push(run(5, "hastype of fun x. fun y. x @ y", secs(1), type_of_apply));

    let hh_db = miniml::db_miniml();
    let corpus = miniml::corpus(SEED, 100);
    let lim6 = Limits {
        bound: 60,
        fuel: 10_000,
        max_steps: 200_000,
    };
    let mut hh_derivs = vec![];
    lines.push(run(6, "big-step equivalence", secs(120), || {
        from_report(
            &harness::equivalence_suite(&hh_db, &corpus, &lim6, &mut hh_derivs).unwrap(),
            Some(100),
        )
    }));
    lines.push(run(7, "structural suite (HH)", secs(60), || {
        let r = harness::structural_hh_suite(&hh_db, &hh_derivs, SEED, 50, 200_000).unwrap();
        let (mut ok, d) = from_report(&r, Some(50));
        ok &= r.passed == 50;
        (ok, d)
    }));
    lines.push(run(8, "subject reduction (Mini-ML)", secs(120), || {
        from_report(
            &harness::sr_miniml_suite(&hh_db, &corpus, &harness::default_sr()).unwrap(),
            None,
        )
    }));
    lines.push(run(9, "ordered ceval of fun x. x", secs(2), ceval_of_identity));

    let cm_db = contmach::db_contmach();
    let cm_corpus: Vec<Expr> = corpus.iter().take(50).cloned().collect();
    let lim11 = Limits {
        bound: 80,
        fuel: 2_000,
        max_steps: 200_000,
    };
    let mut ol_derivs = vec![];
    lines.push(run(11, "machine/provability correspondence", secs(180), || {
        from_report(
            &harness::correspondence_suite(&cm_db, &cm_corpus, &lim11, &mut ol_derivs).unwrap(),
            Some(50),
        )
    }));
    let typing = harness::harvest_olli_typing(&cm_db, &cm_corpus, &lim11).unwrap();
    let mut ol_pool = ol_derivs.clone();
    ol_pool.extend(typing);
    lines.push(run(10, "structural suite (ordered)", secs(60), || {
        let r = harness::structural_olli_suite(&cm_db, &ol_pool, SEED, 30, 200_000).unwrap();
        let (mut ok, d) = from_report(&r, Some(30));
        ok &= r.passed == 30;
        (ok, d)
    }));
    lines.push(run(12, "continuation-machine subject reduction", secs(180), || {
        from_report(&harness::sr_contmach_suite(&cm_db, &corpus, &lim11).unwrap(), None)
    }));
    let mut hh_all = hh_derivs.clone();
    hh_all.extend(harness::harvest_hh_typing(&hh_db, &corpus, &lim6).unwrap());
    lines.push(run(13, "checker soundness", secs(30), || {
        let r = harness::checker_suite((&hh_db, &hh_all), (&cm_db, &ol_pool), SEED, 500);
        from_report(&r, Some(500))
    }));

    lines.sort_by_key(|l| l.n);
    let mut failed = vec![];
    for l in &lines {
        let status = if l.pass() { "PASS" } else { "FAIL" };
        let over = if l.elapsed > l.limit { " over time limit" } else { "" };
        println!(
            "[{status}] {:>2} {}: {} ({:.2?} / {:?}{over})",
            l.n, l.name, l.detail, l.elapsed, l.limit
        );
        if !l.pass() {
            failed.push(l.n);
        }
    }
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
