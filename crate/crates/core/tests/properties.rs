use proptest::prelude::*;

use hybrid::contmach::{self, direct_typecheck, machine_trace, Subject};
use hybrid::harness;
use hybrid::miniml::{self, gen_closed_term, meta_eval, EvalOutcome};
use hybrid::syntax::{abstract_var, instantiate, lambda, lbind, level, proper, Abstraction, Expr};
use hybrid::unify::{MetaStore, UTerm};

/// Closed terms over three free variables.
fn closed_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => (0u32..3).prop_map(Expr::var),
        2 => (0u32..2).prop_map(Expr::bnd),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::app(l, r)),
            inner.prop_map(Expr::abs),
        ]
    })
    .prop_filter("proper", proper)
}

proptest! {
    #[test]
    fn abstract_then_instantiate(e in closed_expr(), k in 0u32..3) {
        let a = abstract_var(&e, k);
        prop_assert!(level(1, &a.body));
        prop_assert_eq!(instantiate(&a, &Expr::var(k)).unwrap(), e);
    }

    #[test]
    fn lambda_is_injective(a in closed_expr(), b in closed_expr()) {
        let (x, y) = (abstract_var(&a, 0), abstract_var(&b, 0));
        prop_assert_eq!(lambda(&x) == lambda(&y), x == y);
    }

    #[test]
    fn lbind_zero_is_the_body(e in closed_expr()) {
        let a = abstract_var(&e, 1);
        prop_assert_eq!(Expr::abs(lbind(0, &a).unwrap()), lambda(&a));
    }

    #[test]
    fn unifier_equates_both_sides(e in closed_expr(), k in 0u32..2) {
        // e[X / VAR k] against e, with VAR 0..2 in scope of X
        let mut store = MetaStore::with_eigen_start(3);
        let m = store.fresh_meta(0);
        let pat = abstract_var(&e, k);
        let lhs = hybrid::unify::plug(&UTerm::from(&pat.body), &UTerm::Meta(m));
        let rhs = UTerm::from(&e);
        prop_assert!(store.unify(&lhs, &rhs).is_ok());
        let d = Expr::var(9);
        prop_assert_eq!(store.ground(&lhs, &d), store.ground(&rhs, &d));
    }

    #[test]
    fn suites_hold_on_any_seed(seed in any::<u64>()) {
        prop_assert!(harness::abstraction_suite(seed, 20).ok());
        let r = harness::adequacy_suite(seed, 10);
        prop_assert!(r.ok(), "{:?}", r.diagnostics);
    }

    #[test]
    fn generated_terms_are_closed(seed in any::<u64>(), size in 1usize..20) {
        let e = gen_closed_term(seed, size);
        prop_assert!(proper(&e));
        prop_assert!(e.max_var().is_none());
        prop_assert_eq!(miniml::parse(&miniml::show(&e).unwrap()).unwrap(), e);
    }

    #[test]
    fn values_are_functions(seed in any::<u64>(), size in 1usize..16) {
        let e = gen_closed_term(seed, size);
        if let EvalOutcome::Value(v) = meta_eval(&e, 5_000).unwrap() {
            prop_assert!(miniml::as_fun(&v).is_some());
            prop_assert_eq!(meta_eval(&v, 10).unwrap(), EvalOutcome::Value(v.clone()));
        }
    }

    #[test]
    fn machine_states_stay_typed(seed in any::<u64>(), size in 1usize..14) {
        let e = gen_closed_term(seed, size);
        let db = contmach::db_contmach();
        if let hybrid::search::SearchResult::Proved(s) = contmach::olli_type(&db, &e, 40, 50_000).unwrap() {
            let t = s.derivation;
            let (states, _) = machine_trace(&e, 500).unwrap();
            for st in &states {
                prop_assert!(direct_typecheck(&[], Subject::State(st), &t), "{} : {}", st, t);
            }
        }
    }
}

#[test]
fn abstraction_from_body_round_trips() {
    let b = Expr::app(Expr::bnd(0), Expr::var(1));
    let a = Abstraction::from_body(b.clone());
    assert_eq!(
        instantiate(&a, &Expr::var(1)).unwrap(),
        Expr::app(Expr::var(1), Expr::var(1))
    );
}
