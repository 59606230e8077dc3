// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use svaflow::compare::{match_sets, verdict_vector, MatchKind};
use svaflow::report::{render_csv, render_markdown, DesignRow};
use svaflow::sva::{normalize, AssertionAst};
use svaflow::trace::Trace;
use svaflow::verilog::{extract_signals, Direction};

fn inventory_source() -> impl Strategy<Value = String> {
    let port = (prop::sample::select(vec!["input", "output", "inout"]), 1u32..65, prop::option::of(1u32..5));
    let internal = (1u32..65, prop::option::of(1u32..5));
    (
        prop::collection::vec(port, 0..6),
        prop::collection::vec(internal, 0..4),
        prop::option::of(1i64..9),
        any::<bool>(),
    )
        .prop_map(|(ports, internals, param, clocked)| {
            let mut decls: Vec<String> = Vec::new();
            if clocked {
                decls.push("input clk_i".into());
                decls.push("input rst_ni".into());
            }
            for (i, (dir, w, arr)) in ports.iter().enumerate() {
                let range = if *w > 1 { format!("[{}:0] ", w - 1) } else { String::new() };
                let arr = arr.map(|n| format!(" [{n}]")).unwrap_or_default();
                decls.push(format!("{dir} logic {range}p{i}{arr}"));
            }
            let params = param.map(|n| format!(" #(parameter N = {n})")).unwrap_or_default();
            let mut src = format!("module m{params} ({});\n", decls.join(", "));
            for (i, (w, arr)) in internals.iter().enumerate() {
                let range = if *w > 1 { format!("[{}:0] ", w - 1) } else { String::new() };
                let arr = arr.map(|n| format!(" [{n}]")).unwrap_or_default();
                src.push_str(&format!("  logic {range}s{i}{arr};\n"));
            }
            src.push_str("endmodule\n");
            src
        })
}

fn small_set() -> impl Strategy<Value = Vec<AssertionAst>> {
    prop::collection::vec(common::assertion(), 0..4).prop_map(|mut v| {
        for (i, a) in v.iter_mut().enumerate() {
            a.name = format!("a{i}");
        }
        v
    })
}

fn probes() -> impl Strategy<Value = Vec<Trace>> {
    prop::collection::vec(common::trace(6), 1..4)
}

fn row() -> impl Strategy<Value = DesignRow> {
    (0usize..50, 0usize..50, prop::option::of((0usize..50, 0usize..50)), 0u64..100_000).prop_map(|(r, g, alt, span)| {
        DesignRow {
            module_name: "d".into(),
            reference_assert_count: r,
            generated_assert_count: g,
            alt_assert_count: alt.map(|a| a.0),
            common_assert_count: alt.map(|a| a.1.min(a.0).min(g)),
            trace_time_span: span,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn extraction_round_trips_and_is_deterministic(src in inventory_source()) {
        let inv = extract_signals(&src).unwrap();
        prop_assert_eq!(&extract_signals(&src).unwrap(), &inv);
        let again = extract_signals(&inv.render_declarations()).unwrap();
        prop_assert_eq!(&again, &inv);
        prop_assert!(inv.signals.iter().filter(|s| s.name.starts_with('s')).all(|s| s.direction == Direction::Internal));
    }

    #[test]
    fn match_count_is_symmetric(l in small_set(), r in small_set(), p in probes()) {
        let none = BTreeMap::new();
        prop_assert_eq!(match_sets(&l, &r, &p, &none).count, match_sets(&r, &l, &p, &none).count);
    }

    #[test]
    fn structural_matching_is_reflexive(l in small_set(), p in probes()) {
        let m = match_sets(&l, &l, &p, &BTreeMap::new());
        prop_assert_eq!(m.count, l.len());
        let normalized: Vec<AssertionAst> = l.iter().map(normalize).collect();
        let m = match_sets(&l, &normalized, &p, &BTreeMap::new());
        prop_assert!(m.pairs.iter().all(|x| x.kind == MatchKind::Structural));
        prop_assert_eq!(m.count, l.len());
    }

    #[test]
    fn structural_matching_is_transitive(a in common::assertion(), b in common::assertion(), c in common::assertion()) {
        let (na, nb, nc) = (normalize(&a), normalize(&b), normalize(&c));
        if na.same_property(&nb) && nb.same_property(&nc) {
            prop_assert!(na.same_property(&nc));
        }
        // a normalized copy is always equal to the original's normal form
        prop_assert!(normalize(&na).same_property(&na));
    }

    #[test]
    fn behavioral_pairs_agree_on_every_probe(l in small_set(), r in small_set(), p in probes()) {
        let none = BTreeMap::new();
        let m = match_sets(&l, &r, &p, &none);
        for pair in m.pairs.iter().filter(|x| x.kind == MatchKind::Behavioral) {
            let a = l.iter().find(|x| x.name == pair.left).unwrap();
            let b = r.iter().find(|x| x.name == pair.right).unwrap();
            prop_assert_eq!(verdict_vector(a, &p, &none).unwrap(), verdict_vector(b, &p, &none).unwrap());
        }
    }

    #[test]
    fn markdown_and_csv_carry_the_same_numbers(rows in prop::collection::vec(row(), 0..5)) {
        let md = render_markdown(&rows);
        let csv = render_csv(&rows);
        prop_assert_eq!(&md, &render_markdown(&rows));
        let md_cells: Vec<Vec<String>> = md
            .lines()
            .skip(2)
            .take_while(|l| l.starts_with('|'))
            .map(|l| l.trim_matches('|').split('|').map(|c| c.trim().to_string()).collect())
            .collect();
        let csv_cells: Vec<Vec<String>> = csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
        prop_assert_eq!(md_cells, csv_cells);
    }
}
