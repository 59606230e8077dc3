// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use svaflow::sva::{has_errors, parse_assertions, pretty_print, print_assertions, DiagCode};

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn every_listing_parses_without_errors() {
    for (name, text) in corpus() {
        let (asts, diags) = parse_assertions(&text);
        assert!(!has_errors(&diags), "{name}: {:#?}", diags.iter().map(|d| d.render(Some(&text))).collect::<Vec<_>>());
        assert!(!asts.is_empty(), "{name}");
    }
}

#[test]
fn every_listing_round_trips() {
    for (name, text) in corpus() {
        let (asts, _) = parse_assertions(&text);
        for a in &asts {
            let printed = pretty_print(a);
            let (back, diags) = parse_assertions(&printed);
            assert!(!has_errors(&diags), "{name}/{}: {diags:?}\n{printed}", a.name);
            assert_eq!(back, vec![a.clone()], "{name}\n{printed}");
        }
        let (all, _) = parse_assertions(&print_assertions(&asts));
        assert_eq!(all, asts);
    }
}

#[test]
fn raw_timer_set_shape() {
    let text = corpus().into_iter().find(|(n, _)| n == "rv_timer_raw.sva").unwrap().1;
    let (asts, diags) = parse_assertions(&text);
    let names: Vec<&str> = asts.iter().map(|a| a.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "tick_count_reset",
            "tick_generate",
            "tick_count_increment",
            "tick_count_prescaler",
            "update_mtime_d",
            "mtime_exceed",
            "interrupt_assert"
        ]
    );
    assert!(asts[5].generate.is_some() && asts[6].generate.is_some());
    assert!(diags.iter().any(|d| d.code == DiagCode::ToleratedVariant));
}

#[test]
fn misnamed_assert_binds_to_preceding_property() {
    let text = corpus().into_iter().find(|(n, _)| n == "rom_ctrl.sva").unwrap().1;
    let (asts, diags) = parse_assertions(&text);
    assert_eq!(asts.iter().map(|a| a.name.as_str()).collect::<Vec<_>>(), ["Checker_done", "Counter_done", "Current_state"]);
    assert!(diags.iter().any(|d| d.message.contains("Current_satate")));
}
