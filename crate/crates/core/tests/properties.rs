// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;
use svaflow::sva::*;
use svaflow::trace::{evaluate, oracle_evaluate};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(a in common::printable_assertion()) {
        let text = pretty_print(&a);
        let (back, diags) = parse_assertions(&text);
        prop_assert!(!has_errors(&diags), "{text}\n{diags:?}");
        prop_assert_eq!(back, vec![a], "{}", text);
    }

    #[test]
    fn normalize_is_idempotent(a in common::printable_assertion()) {
        let once = normalize(&a);
        prop_assert_eq!(normalize(&once), once);
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        let (_, diags) = parse_assertions(&text);
        for d in diags.iter().filter(|d| d.is_error()) {
            prop_assert!(!d.span.is_empty());
        }
    }

    #[test]
    fn parser_never_panics_on_near_miss_text(
        parts in prop::collection::vec(prop::sample::select(vec![
            "property", "p", ";", "@(posedge clk)", "(", ")", "|->", "|=>", "##1", "##[1:2]", "a", "b",
            "&&", "!", "endproperty", "end property", "assert property", "(p)", "disable iff", "$past(",
            "generate", "for (genvar t = 0; t < N; t++) begin", "end", "endgenerate", "else $fatal(\"x\")",
            "'Idle'", "===", "[t]",
        ]), 0..40)
    ) {
        let text = parts.join(" ");
        let (asts, diags) = parse_assertions(&text);
        for d in diags.iter().filter(|d| d.is_error()) {
            prop_assert!(!d.span.is_empty(), "{text}");
        }
        for a in asts {
            let (back, _) = parse_assertions(&pretty_print(&a));
            prop_assert_eq!(back.len(), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normalize_preserves_verdicts(a in common::assertion(), t in common::trace(6)) {
        let before = evaluate(&a, &t).unwrap();
        let after = evaluate(&normalize(&a), &t).unwrap();
        prop_assert_eq!(
            (before.passes, before.fails, before.vacuous, before.disabled, before.incomplete),
            (after.passes, after.fails, after.vacuous, after.disabled, after.incomplete),
            "{}\n{}", pretty_print(&a), t.dump()
        );
        prop_assert_eq!(before.fail_cycles, after.fail_cycles);
    }

    #[test]
    fn evaluator_matches_oracle(a in common::assertion(), t in common::trace(6)) {
        let fast = evaluate(&a, &t).unwrap();
        let slow = oracle_evaluate(&a, &t).unwrap();
        prop_assert_eq!(fast, slow, "{}\n{}", pretty_print(&a), t.dump());
    }

    #[test]
    fn attempts_are_conserved(a in common::assertion(), t in common::trace(6)) {
        let r = evaluate(&a, &t).unwrap();
        prop_assert_eq!(r.attempts, t.cycles());
        prop_assert!(r.is_consistent());
    }

    #[test]
    fn stronger_disable_never_adds_verdicts(a in common::assertion(), extra in common::bool_expr(2), t in common::trace(6)) {
        let mut stronger = a.clone();
        stronger.disable = Some(match a.disable.clone() {
            Some(d) => BoolExpr::or(d, extra),
            None => extra,
        });
        let r0 = evaluate(&a, &t).unwrap();
        let r1 = evaluate(&stronger, &t).unwrap();
        prop_assert!(r1.passes + r1.fails <= r0.passes + r0.fails);
        prop_assert!(r1.disabled >= r0.disabled);
    }

    #[test]
    fn evaluation_is_deterministic(a in common::assertion(), t in common::trace(6)) {
        prop_assert_eq!(evaluate(&a, &t).unwrap(), evaluate(&a, &t).unwrap());
    }
}
