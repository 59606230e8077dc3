// SPDX-License-Identifier: Apache-2.0

//! Renders the prompt for each stage of the flow.

use svaflow::orchestrator::{build_prompt, Feedback, Payload, Stage};
use svaflow::sva::{check_semantics, parse_assertions};
use svaflow::verilog::extract_signals;

fn main() {
    let rtl = "module hmac(input clk_i, input rst_ni, input hmac_en, output logic fifo_empty); endmodule";
    let sva = "property fifo_idle; @(posedge clk_i) disable iff (!rst_ni) !hmac_ena |-> fifo_empty; endproperty\n\
               assert property (fifo_idle);";
    let inv = extract_signals(rtl).unwrap();
    let (asts, _) = parse_assertions(sva);
    let diags: Vec<String> = check_semantics(&asts[0], &inv).iter().map(|d| d.render(None)).collect();

    let payloads = [
        (Stage::ContextSeed, Payload::Context(vec![("notes.md".into(), "Prefer |-> for combinational outputs.".into())])),
        (Stage::Spec, Payload::Spec("The FIFO is empty while HMAC is disabled.".into())),
        (Stage::VerilogSync, Payload::Verilog { source: rtl.into(), assertions: sva.into() }),
        (
            Stage::ErrorFeedback,
            Payload::Feedback(Feedback {
                assertion: "fifo_idle".into(),
                text: sva.into(),
                diagnostics: diags,
                failure: None,
                iteration: 1,
            }),
        ),
    ];
    for (stage, payload) in &payloads {
        let p = build_prompt(*stage, "hmac", payload, 0).unwrap();
        println!("==== {} ====\n{}\n", stage.as_str(), p.body);
    }
    // an empty spec is refused
    println!("{}", build_prompt(Stage::Spec, "hmac", &Payload::Spec(String::new()), 0).unwrap_err());
}
