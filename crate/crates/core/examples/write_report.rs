// SPDX-License-Identifier: Apache-2.0

//! Replays the timer session and writes report.md, report.csv and
//! iterations.csv.
//!
//!     cargo run --example write_report -- [out_dir]

use std::path::Path;

use svaflow::orchestrator::backend::ReplayBackend;
use svaflow::orchestrator::{load_config, load_inputs, run_session, AutoApprove, SessionLog};
use svaflow::report::{build_row, iteration_histogram, render_markdown, write_reports};
use svaflow::sim::{timer_probes, ProbeConfig};
use svaflow::sva::load_assertions;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/rv_timer");
    let cfg = load_config(&Path::new(dir).join("session.toml")).unwrap();
    let inputs = load_inputs(&cfg).unwrap();
    let mut backend = ReplayBackend::open(cfg.replay_dir.as_deref().unwrap()).unwrap();
    let session = run_session(&inputs, &cfg, &mut backend, &mut SessionLog::in_memory(), &mut AutoApprove).unwrap();
    let summary = session.summary();

    let alt = load_assertions(&std::fs::read_to_string(Path::new(dir).join("baseline.sva")).unwrap(), "baseline", "rv_timer")
        .unwrap()
        .0;
    let probes = timer_probes(&ProbeConfig::default());
    let (row, _) = build_row(&summary, &[], Some(&alt.assertions), &probes).unwrap();
    let iterations = iteration_histogram(&[(summary, "replay-fixture".into())]);
    print!("{}", render_markdown(std::slice::from_ref(&row)));
    if let Some(out) = std::env::args().nth(1) {
        write_reports(Path::new(&out), &[row], &iterations).unwrap();
        println!("wrote {out}/report.md, report.csv, iterations.csv");
    }
}
