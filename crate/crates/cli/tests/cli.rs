use std::process::{Command, Output};

fn hybrid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybrid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus_file() -> String {
    format!("{}/tests/data/corpus.txt", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn type_of_apply() {
    let o = hybrid(&[
        "query",
        "--ol",
        "miniml",
        "--sl",
        "hh",
        "--bound",
        "8",
        "exists T. hastype(fun x. fun y. x @ y, T)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "T = (i -> i) -> i -> i\n");
}

#[test]
fn ordered_ceval_of_identity() {
    let o = hybrid(&[
        "query",
        "--ol",
        "contmach",
        "--sl",
        "olli",
        "--bound",
        "20",
        "exists V. ceval(fun x. x, V)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "V = fun x. x\n");
}

#[test]
fn small_bound_is_exhausted_not_failed() {
    let o = hybrid(&[
        "query",
        "--ol",
        "miniml",
        "--sl",
        "hh",
        "--bound",
        "1",
        "exists T. hastype(fun x. x, T)",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "");
}

#[test]
fn failure_exit() {
    let o = hybrid(&["query", "eval((fun x. x) @ (fun x. x @ x), fun y. y)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors() {
    assert_eq!(hybrid(&["query", "isterm("]).status.code(), Some(3));
    assert_eq!(hybrid(&["query", "isterm(y)"]).status.code(), Some(3));
    assert_eq!(
        hybrid(&["query", "--ol", "miniml", "--sl", "olli", "tt"]).status.code(),
        Some(3)
    );
    assert_eq!(hybrid(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(hybrid(&["eval", "fun x. y"]).status.code(), Some(3));
    assert_eq!(hybrid(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_and_height() {
    let o = hybrid(&["query", "--json", "exists V. eval((fun x. x) @ (fun y. y), V)"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["checked"], true);
    assert!(v["height"].as_u64().unwrap() > 0);
    assert!(v["solution"]["V"].as_str().unwrap().starts_with("fun "));
    let o = hybrid(&["query", "--show-height", "exists T. hastype(fun x. x, T)"]);
    assert_eq!(stdout(&o), "T = i -> i; height=3\n");
}

#[test]
fn several_solutions() {
    let o = hybrid(&["query", "--max-solutions", "3", "exists E. isterm(E)", "--bound", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn trace_lists_nodes() {
    let o = hybrid(&["query", "--trace", "exists T. hastype(fun x. x, T)"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "T = i -> i");
    assert!(lines[1].starts_with("0\tbc#7\t"));
    assert!(lines.last().unwrap().contains("init"));
}

#[test]
fn eval_and_machine() {
    let o = hybrid(&["eval", "(fun x. x) @ (fun y. y)"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "fun y. y\n".into()));
    let o = hybrid(&["machine", "fun x. x"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "fun x. x\n".into()));
    let o = hybrid(&["machine", "fix x. x", "--fuel", "100"]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(2), "<no value within fuel>\n".into())
    );
    let o = hybrid(&["machine", "--trace", "(fun x. x) @ (fun y. y)"]);
    let out = stdout(&o);
    assert!(out.lines().count() > 2);
    assert_eq!(out.lines().last(), Some("fun y. y"));
}

#[test]
fn suites() {
    let o = hybrid(&["test", "structural-hh", "--samples", "50", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("50 run, 50 passed, 0 failed"), "{}", stdout(&o));
    let o = hybrid(&["test", "adequacy", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("200 passed, 0 failed"));
    let o = hybrid(&["test", "sr-miniml", "--corpus", &corpus_file()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn same_seed_same_output() {
    for args in [
        &["test", "equivalence", "--samples", "30", "--seed", "7"][..],
        &["corpus", "--samples", "20", "--seed", "7"][..],
    ] {
        assert_eq!(hybrid(args).stdout, hybrid(args).stdout);
    }
}

#[test]
fn corpus_round_trips_through_a_file() {
    let o = hybrid(&["corpus", "--samples", "25", "--seed", "3"]);
    let path = std::env::temp_dir().join(format!("hybrid-corpus-{}.txt", std::process::id()));
    std::fs::write(&path, &o.stdout).unwrap();
    let o = hybrid(&["test", "correspondence", "--corpus", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("25 run"));
}
