// SPDX-License-Identifier: Apache-2.0

//! Matches two assertion sets for the timer, structurally and on probe
//! traces. The guarded-antecedent form of the increment check only matches
//! behaviorally, and only when probes keep reset and enable steady while
//! an increment is due.

use std::collections::BTreeMap;

use svaflow::compare::match_sets;
use svaflow::sim::{timer_probes, GuardPolicy, ProbeConfig};
use svaflow::sva::load_assertions;

fn set(file: &str) -> Vec<svaflow::sva::AssertionAst> {
    let path = format!("{}/fixtures/rv_timer/{file}", env!("CARGO_MANIFEST_DIR"));
    load_assertions(&std::fs::read_to_string(path).unwrap(), file, "rv_timer").unwrap().0.assertions
}

fn main() {
    let (generated, baseline) = (set("generated.sva"), set("baseline.sva"));
    let params = BTreeMap::from([("N".to_string(), 2)]);
    for policy in [GuardPolicy::TickAligned, GuardPolicy::Free] {
        let cfg = ProbeConfig { policy, ..ProbeConfig::default() };
        let m = match_sets(&generated, &baseline, &timer_probes(&cfg), &params).with_seed(cfg.seed);
        println!("{policy:?} probes\n{}", m.render_table());
    }
}
