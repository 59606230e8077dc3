// SPDX-License-Identifier: Apache-2.0

//! Prints the signal inventory of an RTL file.
//!
//!     cargo run --example extract_signals -- [file.sv] [module]

use svaflow::verilog::{extract_signals_with, ExtractOptions};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/rv_timer/rv_timer.sv").into());
    let opts = ExtractOptions { module: std::env::args().nth(2), ..Default::default() };
    let src = std::fs::read_to_string(&path).expect("readable RTL");
    let inv = extract_signals_with(&src, &opts).unwrap_or_else(|e| panic!("{path}: {e}"));
    println!("module {} {:?}", inv.module_name, inv.parameters);
    for s in &inv.signals {
        let arr = s.array_len.map(|n| format!(" [{n}]")).unwrap_or_default();
        println!("  {:10} {:8?} {:3} bits{arr}  {:?}", s.name, s.direction, s.width, s.role_hint);
    }
}
