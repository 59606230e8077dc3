// SPDX-License-Identifier: Apache-2.0

//! Runs the refinement loop on the timer fixture with recorded replies and
//! prints each assertion's status and the repair prompts that were sent.
//!
//!     cargo run --example replay_session -- [session.jsonl]

use std::path::Path;

use svaflow::orchestrator::backend::ReplayBackend;
use svaflow::orchestrator::{load_config, load_inputs, run_session, AutoApprove, LogEvent, SessionLog, Stage};

fn main() {
    let cfg = load_config(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/rv_timer/session.toml"))).unwrap();
    let inputs = load_inputs(&cfg).unwrap();
    let mut backend = ReplayBackend::open(cfg.replay_dir.as_deref().unwrap()).unwrap();
    let mut log = match std::env::args().nth(1) {
        Some(p) => SessionLog::create(Path::new(&p)).unwrap(),
        None => SessionLog::in_memory(),
    };
    let session = run_session(&inputs, &cfg, &mut backend, &mut log, &mut AutoApprove).unwrap();

    for r in log.records() {
        if let LogEvent::Prompt { stage: Stage::ErrorFeedback, iteration, assertion: Some(a), body } = &r.event {
            let first = body.lines().find(|l| l.contains("failed") || l.contains("error[")).unwrap_or("");
            println!("repair {a} #{iteration}: {first}");
        }
    }
    for a in &session.assertions {
        println!("{:22} {:10} {}", a.name, a.status.as_str(), a.iterations_used);
    }
    println!("{} replies left unused", backend.remaining());
}
