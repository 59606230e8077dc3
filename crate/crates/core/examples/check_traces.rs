// SPDX-License-Identifier: Apache-2.0

//! Evaluates the raw and repaired reset assertion on the delay trace.
//! The raw form fails in the cycle where `active` falls.

use svaflow::sim::{fixture_stimuli, simulate_timer};
use svaflow::sva::parse_assertions;
use svaflow::trace::{evaluate, oracle_evaluate};

const RAW: &str = "property tick_count_reset;
  @(posedge clk_i) disable iff (!rst_ni) (!active) |-> (tick_count == 0);
endproperty
assert property (tick_count_reset);";

fn main() {
    let (_, stim) = fixture_stimuli().into_iter().next().unwrap();
    let trace = simulate_timer(&stim);
    let fixed = RAW.replace("|-> (", "|-> ##1 (");
    for src in [RAW, fixed.as_str()] {
        let (asts, _) = parse_assertions(src);
        let r = evaluate(&asts[0], &trace).unwrap();
        println!(
            "{} pass {} fail {} vacuous {} disabled {} incomplete {}",
            svaflow::sva::pretty_print(&asts[0]).lines().nth(1).unwrap().trim(),
            r.passes, r.fails, r.vacuous, r.disabled, r.incomplete
        );
        if let Some(m) = &r.first_failure_message {
            println!("  {m}");
        }
    }

    // the brute-force oracle agrees on a short prefix
    let short = svaflow::sim::simulate_timer(&svaflow::sim::TimerStimulus {
        rst_ni: stim.rst_ni[..8].to_vec(),
        active: stim.active[..8].to_vec(),
        prescaler: stim.prescaler[..8].to_vec(),
        step: stim.step[..8].to_vec(),
        mtimecmp: stim.mtimecmp,
    });
    let (asts, _) = parse_assertions(RAW);
    assert_eq!(evaluate(&asts[0], &short), oracle_evaluate(&asts[0], &short));
    println!("oracle agrees on the first 8 cycles");
}
