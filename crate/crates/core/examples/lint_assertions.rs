// SPDX-License-Identifier: Apache-2.0

//! Parses assertion text, checks names against the timer RTL and prints
//! the normalized form of each assertion.

use svaflow::sva::{check_semantics, normalize, parse_assertions, pretty_print};
use svaflow::verilog::extract_signals;

const TEXT: &str = r#"
// raw form: `end property`, a parenthesized body and a typo in a name
property tick_generate;
(@(posedge clk_i) disable iff (!rst_ni) (tick_count >= prescaler && active_q) |=> tick);
end property
assert property(tick_generate);

property update_mtime_d;
  @(posedge clk_i) mtime_d == mtime + step;
endproperty
assert property (update_mtime_d);
"#;

fn main() {
    let rtl = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/rv_timer/rv_timer.sv")).unwrap();
    let inv = extract_signals(&rtl).unwrap();
    let (asts, diags) = parse_assertions(TEXT);
    for d in &diags {
        println!("{}", d.render(Some(TEXT)));
    }
    for a in &asts {
        for d in check_semantics(a, &inv) {
            println!("{}", d.render(None));
        }
        println!("{}", pretty_print(&normalize(a)));
    }
}
