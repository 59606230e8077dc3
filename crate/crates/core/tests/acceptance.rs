// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria, one line each. Runs without the test harness so the
//! lines always print; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use svaflow::compare::{match_sets, MatchKind};
use svaflow::orchestrator::backend::{ReplayBackend, ScriptedBackend};
use svaflow::orchestrator::log::strip_timestamps;
use svaflow::orchestrator::{load_config, load_inputs, run_session, AutoApprove, RefinementSession, SessionLog, Status};
use svaflow::report::{build_row, iteration_histogram, render_iterations_csv, render_markdown};
use svaflow::sim::{fixture_stimuli, simulate_timer, timer_probes, ProbeConfig};
use svaflow::sva::*;
use svaflow::trace::{evaluate, oracle_evaluate, Trace};

const CORPUS_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_INSTANCES: usize = 10_000;
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const REPLAY_LIMIT: Duration = Duration::from_secs(10);
const PROPERTY_CASES: u32 = 1_000;

type Verdict = Result<String, String>;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn read(rel: &str) -> String {
    std::fs::read_to_string(root().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn parse_ok(text: &str) -> Vec<AssertionAst> {
    let (a, d) = parse_assertions(text);
    assert!(!has_errors(&d), "{d:?}");
    a
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn corpus_parse() -> Verdict {
    let start = Instant::now();
    let mut files: Vec<_> = std::fs::read_dir(root().join("corpus")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut count = 0;
    for path in &files {
        let text = std::fs::read_to_string(path).unwrap();
        let (asts, diags) = parse_assertions(&text);
        let name = path.file_name().unwrap().to_string_lossy();
        ensure(!has_errors(&diags), format!("{name} has error diagnostics"))?;
        ensure(!asts.is_empty(), format!("{name} yields no assertion"))?;
        for a in &asts {
            let (back, d) = parse_assertions(&pretty_print(a));
            ensure(!has_errors(&d) && back == vec![a.clone()], format!("{name}/{} does not round-trip", a.name))?;
        }
        count += asts.len();
    }
    let took = start.elapsed();
    ensure(took < CORPUS_LIMIT, format!("took {took:?}"))?;
    Ok(format!("{} listings, {count} assertions, 0 errors, round-trip ok, {took:.2?}", files.len()))
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (common::assertion(), common::trace(6));
    let mut disagreements = 0;
    for _ in 0..ORACLE_INSTANCES {
        let (a, t) = strategy.new_tree(&mut runner).unwrap().current();
        if evaluate(&a, &t).unwrap() != oracle_evaluate(&a, &t).unwrap() {
            disagreements += 1;
        }
    }
    let took = start.elapsed();
    ensure(disagreements == 0, format!("{disagreements} disagreements"))?;
    ensure(took < ORACLE_LIMIT, format!("took {took:?}"))?;
    Ok(format!("{ORACLE_INSTANCES} instances, 0 disagreements, {took:.2?}"))
}

fn replay(log: &mut SessionLog) -> RefinementSession {
    let cfg = load_config(&root().join("rv_timer/session.toml")).unwrap();
    let inputs = load_inputs(&cfg).unwrap();
    let mut backend = ReplayBackend::open(cfg.replay_dir.as_deref().unwrap()).unwrap();
    run_session(&inputs, &cfg, &mut backend, log, &mut AutoApprove).unwrap()
}

fn repair_trajectory() -> Verdict {
    let start = Instant::now();
    let s = replay(&mut SessionLog::in_memory());
    let took = start.elapsed();
    let iters = |n: &str| s.get(n).map(|a| (a.status, a.iterations_used));
    ensure(iters("tick_count_reset") == Some((Status::Passing, 1)), "assertion 1 is not 1 iteration")?;
    ensure(iters("tick_generate") == Some((Status::Passing, 3)), "assertion 2 is not 3 iterations")?;
    ensure(iters("tick_count_increment") == Some((Status::Passing, 0)), "assertion 3 is not 0 iterations")?;
    let passing = s.passing_set().assertions.len();
    ensure(passing == 7, format!("{passing} passing"))?;
    ensure(took < REPLAY_LIMIT, format!("took {took:?}"))?;
    Ok(format!("iterations 1/3/0, {passing} passing, {took:.2?}"))
}

fn failure_modes() -> Verdict {
    let raw = parse_ok(&read("corpus/rv_timer_raw.sva"));
    let mod1 = parse_ok(&read("corpus/modified_1.sva"));
    let mod2 = parse_ok(&read("corpus/modified_2.sva"));
    let traces: Vec<(&str, Trace)> = fixture_stimuli().into_iter().map(|(n, s)| (n, simulate_timer(&s))).collect();
    let delay = &traces.iter().find(|(n, _)| *n == "timer_delay").unwrap().1;
    let r_raw = evaluate(&raw[0], delay).unwrap();
    let r_mod = evaluate(&mod1[0], delay).unwrap();
    ensure(r_raw.fails > 0 && !r_raw.fail_cycles.is_empty(), "raw assertion 1 does not fail")?;
    ensure(r_mod.fails == 0 && r_mod.passes > 0, "modified assertion 1 does not pass")?;
    let differ = traces.iter().filter(|(_, t)| evaluate(&raw[1], t).unwrap() != evaluate(&mod2[0], t).unwrap()).count();
    ensure(differ > 0, "assertion 2 forms agree on every trace")?;
    Ok(format!(
        "raw 1 fails at cycles {:?}, modified 1 passes; assertion 2 forms differ on {differ} trace(s)",
        r_raw.fail_cycles
    ))
}

fn commonality() -> Verdict {
    let cfg = ProbeConfig::default();
    let probes = timer_probes(&cfg);
    let params = BTreeMap::from([("N".to_string(), 2)]);
    let a11 = parse_ok(&read("corpus/assertion_11.sva"));
    let a12 = parse_ok(&read("corpus/assertion_12.sva"));
    let m = match_sets(&a11, &a12, &probes, &params);
    ensure(m.count == 1 && m.pairs[0].kind == MatchKind::Behavioral, format!("assertions 11/12: {:?}", m.pairs))?;
    let generated = parse_ok(&read("rv_timer/generated.sva"));
    let baseline = parse_ok(&read("rv_timer/baseline.sva"));
    ensure((generated.len(), baseline.len()) == (7, 11), "curated sets are not 7 and 11")?;
    let m = match_sets(&generated, &baseline, &probes, &params);
    ensure(m.count == 5, format!("common {}", m.count))?;
    Ok(format!("11/12 behavioral (probe-consistent), curated 7 vs 11 common 5, {} probes seed {}", probes.len(), cfg.seed))
}

fn signal_sync() -> Verdict {
    let rtl = "module hmac(input clk, input rstt_n, input msg_fifo_req, input hmac_en, output logic reg_hash_startt); endmodule";
    let listing = read("corpus/hmac_process_start.sva");
    let fixed = listing.replace("msg_fifo_reqq", "msg_fifo_req").replace("hmac_ena", "hmac_en");

    let inv = svaflow::verilog::extract_signals(rtl).unwrap();
    let ast = &parse_ok(&listing)[0];
    let text = pretty_print(ast);
    let diags: Vec<Diagnostic> = check_semantics(ast, &inv).into_iter().filter(|d| d.code == DiagCode::UnknownSignal).collect();
    let flagged: Vec<&str> = ["msg_fifo_reqq", "hmac_ena"].into_iter().filter(|s| diags.iter().any(|d| d.message.contains(s))).collect();
    ensure(flagged.len() == 2, format!("flagged only {flagged:?}"))?;

    let mut t = Trace::with_cycles("clk", 6);
    t.insert_known("rstt_n", 1, &[0; 6]);
    t.insert_known("msg_fifo_req", 1, &[0, 1, 0, 0, 1, 0]);
    t.insert_known("hmac_en", 1, &[1; 6]);
    t.insert_known("reg_hash_startt", 1, &[0, 0, 1, 0, 0, 1]);
    let inputs = svaflow::orchestrator::SessionInputs {
        spec: "Hashing starts one cycle after a message request while HMAC is enabled.".into(),
        block_diagram: None,
        rtl: rtl.into(),
        context: vec![],
        traces: vec![("idle".into(), t)],
        references: vec![],
    };
    let fence = |s: &str| format!("```systemverilog\n{s}\n```\n");
    let mut backend = ScriptedBackend::new([fence(&listing), fence(&listing), fence(&fixed)]);
    let cfg = svaflow::orchestrator::SessionConfig { design: "hmac".into(), ..Default::default() };
    run_session(&inputs, &cfg, &mut backend, &mut SessionLog::in_memory(), &mut AutoApprove).map_err(|e| e.to_string())?;
    let prompt = &backend.seen.last().ok_or("no feedback prompt")?.last().unwrap().content;
    for d in &diags {
        let rendered = d.render(Some(&text));
        ensure(prompt.contains(&rendered), format!("prompt lacks `{rendered}`"))?;
    }
    Ok(format!("{} UnknownSignal diagnostics embedded verbatim in the feedback prompt", diags.len()))
}

fn artifacts(s: &RefinementSession) -> (String, String) {
    let baseline = parse_ok(&read("rv_timer/baseline.sva"));
    let summary = s.summary();
    let (row, _) = build_row(&summary, &[], Some(&baseline), &timer_probes(&ProbeConfig::default())).unwrap();
    let it = iteration_histogram(&[(summary, "replay-fixture".into())]);
    (render_markdown(&[row]), render_iterations_csv(&it))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.jsonl"));
        let s = replay(&mut SessionLog::create(&path).unwrap());
        let (md, csv) = artifacts(&s);
        outs.push((strip_timestamps(&std::fs::read_to_string(&path).unwrap()), md, csv));
    }
    ensure(outs[0].0 == outs[1].0, "session logs differ")?;
    ensure(outs[0].1 == outs[1].1, "report.md differs")?;
    ensure(outs[0].2 == outs[1].2, "iterations.csv differs")?;
    Ok(format!("logs ({} lines), report.md, iterations.csv identical", outs[0].0.lines().count()))
}

fn check_property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let cfg = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn property_suite() -> Verdict {
    use proptest::prop_assert;
    check_property("normalize idempotent", common::printable_assertion(), |a| {
        let once = normalize(&a);
        prop_assert!(normalize(&once) == once);
        Ok(())
    })?;
    check_property("normalize preserves verdicts", (common::assertion(), common::trace(6)), |(a, t)| {
        let (x, y) = (evaluate(&a, &t).unwrap(), evaluate(&normalize(&a), &t).unwrap());
        prop_assert!((x.passes, x.fails, x.vacuous, x.disabled) == (y.passes, y.fails, y.vacuous, y.disabled));
        Ok(())
    })?;
    check_property("attempt conservation", (common::assertion(), common::trace(6)), |(a, t)| {
        let r = evaluate(&a, &t).unwrap();
        prop_assert!(r.attempts == t.cycles() && r.is_consistent());
        Ok(())
    })?;
    check_property("disable monotonicity", (common::assertion(), common::bool_expr(2), common::trace(6)), |(a, extra, t)| {
        let mut stronger = a.clone();
        stronger.disable = Some(match a.disable.clone() {
            Some(d) => BoolExpr::or(d, extra),
            None => extra,
        });
        let (r0, r1) = (evaluate(&a, &t).unwrap(), evaluate(&stronger, &t).unwrap());
        prop_assert!(r1.passes + r1.fails <= r0.passes + r0.fails);
        Ok(())
    })?;
    let set = || proptest::collection::vec(common::assertion(), 0..4);
    let probes = proptest::collection::vec(common::trace(6), 1..3);
    check_property("match_sets symmetry", (set(), set(), probes), |(l, r, p): (Vec<AssertionAst>, Vec<AssertionAst>, Vec<Trace>)| {
        let none = BTreeMap::new();
        prop_assert!(match_sets(&l, &r, &p, &none).count == match_sets(&r, &l, &p, &none).count);
        Ok(())
    })?;
    Ok(format!("5 properties x {PROPERTY_CASES} cases pass"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("corpus parse coverage", corpus_parse),
        ("evaluator/oracle equivalence", oracle_equivalence),
        ("repair trajectory", repair_trajectory),
        ("failure-mode fidelity", failure_modes),
        ("commonality", commonality),
        ("signal synchronization", signal_sync),
        ("determinism", determinism),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
