// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/rv_timer").join(rel)
}

fn svaflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svaflow"))
        .args(args)
        .env_remove("SVAFLOW_API_KEY")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

const RAW_A1: &str = "property tick_count_reset;\n\
(@(posedge clk_i) disable iff (!rst_ni) (!active) |-> (tick_count == 0));\n\
end property\nassert property(tick_count_reset);\n";

const MOD_A2: &str = "property tick_generate;\n\
(@(posedge clk_i) disable iff (!rst_ni) (tick_count >= prescaler && active) |-> tick);\n\
endproperty\nassert property(tick_generate);\n";

#[test]
fn extract_cases() {
    let out = svaflow(&["extract", p(&fixture("rv_timer.sv"))]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["signals"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names[0], "clk_i");
    assert!(names.contains(&"intr"));

    let out = svaflow(&["extract", "missing.sv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("missing.sv"));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.sv");
    std::fs::write(&empty, "module empty; endmodule\n").unwrap();
    let out = svaflow(&["extract", p(&empty)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["signals"].as_array().unwrap().is_empty());
}

#[test]
fn lint_flags_unknown_signal() {
    let dir = tempfile::tempdir().unwrap();
    let sva = dir.path().join("a.sva");
    std::fs::write(&sva, MOD_A2.replace("tick)", "tick_q)")).unwrap();
    let out = svaflow(&["lint", p(&sva), "--rtl", p(&fixture("rv_timer.sv"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("UnknownSignal"));
    let out = svaflow(&["lint", p(&fixture("generated.sva")), "--rtl", p(&fixture("rv_timer.sv")), "--json"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let delay = fixture("traces/timer_delay.vcd");

    let good = dir.path().join("good.sva");
    std::fs::write(&good, MOD_A2).unwrap();
    let out = svaflow(&["check", p(&good), p(&delay)]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));

    let raw = dir.path().join("raw.sva");
    std::fs::write(&raw, RAW_A1).unwrap();
    let junit = dir.path().join("j.xml");
    let out = svaflow(&["check", p(&raw), p(&delay), "--junit", p(&junit)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stdout).contains("failed at cycle"));
    assert!(std::fs::read_to_string(&junit).unwrap().contains("<failure"));

    let unknown = dir.path().join("unknown.sva");
    std::fs::write(&unknown, MOD_A2.replace("tick)", "msg_fifo_reqq)")).unwrap();
    let out = svaflow(&["check", p(&unknown), p(&delay)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("UnknownSignal"));

    let out = svaflow(&["check", p(&fixture("generated.sva")), p(&delay), "--params", "N=2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 9);
}

#[test]
fn gen_replay_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("session.toml");
    let out = svaflow(&["gen", "--config", p(&cfg), "--out", p(dir.path()), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let passing = summary["assertions"].as_array().unwrap().iter().filter(|a| a["status"] == "passing").count();
    assert_eq!(passing, 7);
    assert!(dir.path().join("assertions.sva").exists());

    let out = svaflow(&["gen", "--config", p(&cfg), "--backend", "http", "--out", p(&dir.path().join("h"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(text(&out.stderr).contains("SVAFLOW_API_KEY"));

    let out = svaflow(&["gen", "--config", p(&cfg), "--max-iter", "1", "--out", p(&dir.path().join("m"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stdout).lines().any(|l| l.starts_with("tick_generate") && l.contains("abandoned")));
}

#[test]
fn gen_resume_completes_truncated_log() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("session.toml");
    assert_eq!(svaflow(&["gen", "--config", p(&cfg), "--out", p(dir.path())]).status.code(), Some(0));
    let log = dir.path().join("session.jsonl");
    let full = std::fs::read_to_string(&log).unwrap();
    let head: String = full.split_inclusive('\n').take(9).collect();
    std::fs::write(&log, head).unwrap();
    let out = svaflow(&["gen", "--config", p(&cfg), "--out", p(dir.path()), "--resume"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let strip = svaflow::orchestrator::log::strip_timestamps;
    assert_eq!(strip(&std::fs::read_to_string(&log).unwrap()), strip(&full));
}

#[test]
fn compare_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = svaflow(&["compare", p(&fixture("generated.sva")), p(&fixture("baseline.sva")), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let m: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(m["count"], 5);
    assert_eq!(m["probe_seed"], 7);

    let g = dir.path().join("g");
    assert_eq!(svaflow(&["gen", "--config", p(&fixture("session.toml")), "--out", p(&g)]).status.code(), Some(0));
    let r = dir.path().join("r");
    let alt = format!("rv_timer={}", p(&fixture("baseline.sva")));
    let out = svaflow(&["report", p(&g.join("session.jsonl")), "--alt", &alt, "--out", p(&r)]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert_eq!(std::fs::read_to_string(r.join("report.csv")).unwrap().lines().nth(1), Some("rv_timer,0,7,11,5,150"));
    assert!(std::fs::read_to_string(r.join("report.md")).unwrap().contains("Locally measured"));
    let it = std::fs::read_to_string(r.join("iterations.csv")).unwrap();
    assert_eq!(it, "design,tool,total_error_feedback_prompts,source\nrv_timer,generated,5,replay-fixture\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(svaflow(&[]).status.code(), Some(2));
    assert_eq!(svaflow(&["check", "only.sva"]).status.code(), Some(2));
    assert_eq!(svaflow(&["--help"]).status.code(), Some(0));
}
