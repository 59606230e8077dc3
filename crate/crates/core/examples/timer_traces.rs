// SPDX-License-Identifier: Apache-2.0

//! Simulates the timer model and writes VCD traces.
//!
//!     cargo run --example timer_traces -- [out_dir]
//!
//! Without an argument the traces are printed as sample tables.

use svaflow::sim::{fixture_stimuli, simulate_timer};
use svaflow::trace::vcd::{ingest_vcd, write_vcd};

fn main() {
    let out = std::env::args().nth(1);
    for (name, stim) in fixture_stimuli() {
        let trace = simulate_timer(&stim);
        let vcd = write_vcd(&trace, "rv_timer");
        // what we write must read back as the same samples
        let back = ingest_vcd(&vcd, "clk_i").unwrap();
        assert_eq!(back.edge_times, trace.edge_times);
        for (sig, series) in trace.signals() {
            assert_eq!(back.get(sig), Some(series), "{sig}");
        }
        match &out {
            Some(dir) => {
                let path = std::path::Path::new(dir).join(format!("{name}.vcd"));
                std::fs::write(&path, vcd).unwrap();
                println!("wrote {} ({} cycles, span {})", path.display(), trace.cycles(), trace.time_span());
            }
            None => println!("{name}\n{}", trace.dump()),
        }
    }
}
