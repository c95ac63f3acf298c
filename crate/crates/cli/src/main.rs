use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hybrid::contmach::{self, machine_trace, MachineState};
use hybrid::harness::{self, Limits, Report};
use hybrid::miniml::{self, meta_eval, EvalOutcome, SrConfig};
use hybrid::query::{parse_query, Ol};
use hybrid::search::SearchConfig;
use hybrid::sl_hh::{check_hh, solutions_hh};
use hybrid::sl_olli::{check_olli, solutions_olli, QueryOlli};
use hybrid::syntax::Expr;

#[derive(Parser)]
#[command(name = "hybrid", version, about = "Query and test the bundled object logics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OlArg {
    Miniml,
    Contmach,
}

#[derive(Clone, Copy, ValueEnum)]
enum SlArg {
    Hh,
    Olli,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Dfs,
    Iddfs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Abstraction,
    Adequacy,
    Equivalence,
    StructuralHh,
    SrMiniml,
    Correspondence,
    StructuralOlli,
    SrContmach,
    Checker,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prove a goal and print the answer substitutions.
    Query {
        goal: String,
        #[arg(long, value_enum, default_value = "miniml")]
        ol: OlArg,
        /// Defaults to the logic the object logic is written in.
        #[arg(long, value_enum)]
        sl: Option<SlArg>,
        #[arg(long, default_value_t = 20)]
        bound: u32,
        #[arg(long, value_enum, default_value = "dfs")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1)]
        max_solutions: usize,
        /// Print each derivation, one node per line.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        show_height: bool,
    },
    /// Run a property suite.
    Test {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Terms to use instead of generated ones, one per line.
        #[arg(long)]
        corpus: Option<std::path::PathBuf>,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        fuel: Option<u64>,
        /// Print every diagnostic, not only failures.
        #[arg(long)]
        verbose: bool,
    },
    /// Evaluate a closed Mini-ML term (call by value).
    Eval {
        term: String,
        #[arg(long, default_value_t = miniml::DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Run a closed term on the continuation machine (call by name).
    Machine {
        term: String,
        #[arg(long, default_value_t = 2_000)]
        fuel: u64,
        /// Print every state.
        #[arg(long)]
        trace: bool,
    },
    /// Print generated corpus terms, one per line.
    Corpus {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

const EXIT_USAGE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Query {
            goal,
            ol,
            sl,
            bound,
            strategy,
            max_solutions,
            trace,
            json,
            show_height,
        } => {
            let mut cfg = match strategy {
                StrategyArg::Dfs => SearchConfig::dfs(bound),
                StrategyArg::Iddfs => SearchConfig::iddfs(bound),
            };
            cfg = cfg.solutions(max_solutions.max(1));
            let out = Output {
                trace,
                json,
                show_height,
            };
            query(ol, sl, &goal, &cfg, &out)
        }
        Cmd::Test {
            suite,
            seed,
            samples,
            corpus,
            bound,
            fuel,
            verbose,
        } => {
            let corpus = match corpus {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    read_corpus(&text)?
                }
                None => miniml::corpus(seed, samples),
            };
            let r = test(suite, seed, samples, &corpus, bound, fuel)?;
            for d in &r.diagnostics {
                if verbose || d.starts_with("FAIL") {
                    println!("  {d}");
                }
            }
            println!("{}", r.summary());
            eprintln!("elapsed {:.2?}", r.elapsed);
            Ok(if r.ok() { 0 } else { 1 })
        }
        Cmd::Eval { term, fuel } => {
            let e = miniml::parse(&term)?;
            Ok(match meta_eval(&e, fuel)? {
                EvalOutcome::Value(v) => {
                    println!("{}", show(&v));
                    0
                }
                EvalOutcome::Stuck => {
                    println!("<stuck>");
                    1
                }
                EvalOutcome::OutOfFuel => {
                    println!("<no value within fuel>");
                    2
                }
            })
        }
        Cmd::Machine { term, fuel, trace } => {
            let e = miniml::parse(&term)?;
            let (states, done) = machine_trace(&e, fuel)?;
            if trace {
                for s in &states {
                    println!("{s}");
                }
            }
            Ok(match (done, states.last()) {
                (true, Some(MachineState::Answer(v))) => {
                    println!("{}", show(v));
                    0
                }
                (true, _) => {
                    println!("<stuck>");
                    1
                }
                (false, _) => {
                    println!("<no value within fuel>");
                    2
                }
            })
        }
        Cmd::Corpus { seed, samples } => {
            println!("# seed {seed}");
            for e in miniml::corpus(seed, samples) {
                println!("{}", show(&e));
            }
            Ok(0)
        }
    }
}

fn show(e: &Expr) -> String {
    hybrid::pretty::term(e)
}

/// One term per line; blank lines and `#` comments are skipped.
fn read_corpus(text: &str) -> Result<Vec<Expr>> {
    let mut out = vec![];
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        out.push(miniml::parse(line).with_context(|| format!("corpus line {}", i + 1))?);
    }
    Ok(out)
}

struct Output {
    trace: bool,
    json: bool,
    show_height: bool,
}

impl Output {
    fn solution(&self, answer: &[(String, String)], height: u32, trace: impl FnOnce() -> String) {
        if self.json {
            let sol: serde_json::Map<String, serde_json::Value> =
                answer.iter().map(|(n, v)| (n.clone(), json!(v))).collect();
            println!("{}", json!({ "solution": sol, "height": height, "checked": true }));
        } else {
            let mut line = answer
                .iter()
                .map(|(n, v)| format!("{n} = {v}"))
                .collect::<Vec<_>>()
                .join(", ");
            if line.is_empty() {
                line.push_str("yes");
            }
            if self.show_height {
                line.push_str(&format!("; height={height}"));
            }
            println!("{line}");
        }
        if self.trace {
            print!("{}", trace());
        }
    }
}

fn query(ol: OlArg, sl: Option<SlArg>, goal: &str, cfg: &SearchConfig, out: &Output) -> Result<u8> {
    let (ol, sl) = match (ol, sl) {
        (OlArg::Miniml, None | Some(SlArg::Hh)) => (Ol::MiniMl, SlArg::Hh),
        (OlArg::Contmach, None | Some(SlArg::Olli)) => (Ol::ContMach, SlArg::Olli),
        (OlArg::Miniml, Some(SlArg::Olli)) => bail!("the Mini-ML program is written for --sl hh"),
        (OlArg::Contmach, Some(SlArg::Hh)) => bail!("the machine program is written for --sl olli"),
    };
    let q = parse_query(ol, goal)?;
    let (found, exhausted) = match sl {
        SlArg::Hh => {
            let db = miniml::db_miniml();
            let res = solutions_hh(&db, &[], &q.goal, &q.store, cfg)?;
            for s in &res.solutions {
                if let Err(f) = check_hh(&db, &s.derivation) {
                    bail!("internal error: derivation rejected by the checker: {f:?}");
                }
                out.solution(&q.answer(&s.store, &db.default), s.derivation.height(), || {
                    s.derivation.trace()
                });
            }
            (res.solutions.len(), res.exhausted)
        }
        SlArg::Olli => {
            let db = contmach::db_contmach();
            let oq = QueryOlli::Goal(q.goal.clone());
            let res = solutions_olli(&db, &[], &[], &oq, &q.store, cfg)?;
            for s in &res.solutions {
                if let Err(f) = check_olli(&db, &s.derivation) {
                    bail!("internal error: derivation rejected by the checker: {f:?}");
                }
                out.solution(&q.answer(&s.store, &db.default), s.derivation.height(), || {
                    s.derivation.trace()
                });
            }
            (res.solutions.len(), res.exhausted)
        }
    };
    Ok(match (found, exhausted) {
        (n, _) if n > 0 => 0,
        (_, false) => {
            eprintln!("no");
            1
        }
        (_, true) => {
            eprintln!("no proof within bound {}", cfg.bound);
            2
        }
    })
}

fn test(
    suite: Suite,
    seed: u64,
    samples: usize,
    corpus: &[Expr],
    bound: Option<u32>,
    fuel: Option<u64>,
) -> Result<Report> {
    let hh_lim = Limits {
        bound: bound.unwrap_or(60),
        fuel: fuel.unwrap_or(miniml::DEFAULT_FUEL),
        max_steps: 200_000,
    };
    let ol_lim = Limits {
        bound: bound.unwrap_or(80),
        fuel: fuel.unwrap_or(2_000),
        max_steps: 200_000,
    };
    let hh_db = miniml::db_miniml();
    let cm_db = contmach::db_contmach();
    let hh_harvest = |corpus: &[Expr]| -> Result<Vec<_>> {
        let mut ds = vec![];
        harness::equivalence_suite(&hh_db, corpus, &hh_lim, &mut ds)?;
        ds.extend(harness::harvest_hh_typing(&hh_db, corpus, &hh_lim)?);
        Ok(ds)
    };
    let ol_harvest = |corpus: &[Expr]| -> Result<Vec<_>> {
        let mut ds = vec![];
        harness::correspondence_suite(&cm_db, corpus, &ol_lim, &mut ds)?;
        ds.extend(harness::harvest_olli_typing(&cm_db, corpus, &ol_lim)?);
        Ok(ds)
    };
    Ok(match suite {
        Suite::Abstraction => harness::abstraction_suite(seed, samples),
        Suite::Adequacy => harness::adequacy_suite(seed, samples),
        Suite::Equivalence => harness::equivalence_suite(&hh_db, corpus, &hh_lim, &mut vec![])?,
        Suite::StructuralHh => {
            let ds = hh_harvest(corpus)?;
            harness::structural_hh_suite(&hh_db, &ds, seed, samples, hh_lim.max_steps)?
        }
        Suite::SrMiniml => {
            let cfg = SrConfig {
                bound: hh_lim.bound,
                fuel: hh_lim.fuel,
                ..SrConfig::default()
            };
            harness::sr_miniml_suite(&hh_db, corpus, &cfg)?
        }
        Suite::Correspondence => harness::correspondence_suite(&cm_db, corpus, &ol_lim, &mut vec![])?,
        Suite::StructuralOlli => {
            let ds = ol_harvest(corpus)?;
            harness::structural_olli_suite(&cm_db, &ds, seed, samples, ol_lim.max_steps)?
        }
        Suite::SrContmach => harness::sr_contmach_suite(&cm_db, corpus, &ol_lim)?,
        Suite::Checker => {
            let hh = hh_harvest(corpus)?;
            let ol = ol_harvest(corpus)?;
            harness::checker_suite((&hh_db, &hh), (&cm_db, &ol), seed, samples)
        }
    })
}
