// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use proptest::prelude::*;
use svaflow::sva::*;
use svaflow::trace::Trace;

pub const CLOCK: &str = "clk";
pub const SIGNALS: [&str; 3] = ["a", "b", "c"];

fn leaf() -> impl Strategy<Value = BoolExpr> {
    prop_oneof![
        6 => prop::sample::select(SIGNALS.to_vec()).prop_map(BoolExpr::ident),
        2 => (-1i64..4).prop_map(BoolExpr::int),
        1 => Just(BoolExpr::Label { text: "Idle State".into() }),
    ]
}

pub fn bool_expr(depth: u32) -> BoxedStrategy<BoolExpr> {
    leaf()
        .prop_recursive(depth, 24, 2, |inner| {
            let cmp = prop::sample::select(vec![CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge]);
            let arith = prop::sample::select(vec![ArithOp::Add, ArithOp::Sub]);
            prop_oneof![
                inner.clone().prop_map(BoolExpr::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| BoolExpr::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| BoolExpr::or(a, b)),
                (cmp, inner.clone(), inner.clone()).prop_map(|(op, a, b)| BoolExpr::cmp(op, a, b)),
                (arith, inner.clone(), inner.clone()).prop_map(|(op, a, b)| BoolExpr::arith(op, a, b)),
                (inner.clone(), prop::option::of(1u32..3)).prop_map(|(e, d)| BoolExpr::past(e, d)),
                inner.clone().prop_map(|e| BoolExpr::Rose { expr: Box::new(e) }),
                inner.clone().prop_map(|e| BoolExpr::Fell { expr: Box::new(e) }),
                inner.prop_map(|e| BoolExpr::Stable { expr: Box::new(e) }),
            ]
        })
        .boxed()
}

fn delay(max: u32) -> impl Strategy<Value = DelayRange> {
    (0..=max, 0..=max).prop_map(|(a, b)| DelayRange { lo: a.min(b), hi: a.max(b) })
}

pub fn sequence(max_delay: u32, depth: u32) -> impl Strategy<Value = SequenceExpr> {
    (prop::option::of(delay(max_delay)), prop::collection::vec((bool_expr(depth), delay(max_delay)), 1..=3)).prop_map(
        |(lead, parts)| {
            let n = parts.len();
            let mut elements = Vec::new();
            let mut delays = Vec::new();
            for (i, (e, d)) in parts.into_iter().enumerate() {
                elements.push(e);
                if i + 1 < n {
                    delays.push(d);
                }
            }
            SequenceExpr { lead, elements, delays }
        },
    )
}

pub fn property(max_delay: u32, depth: u32) -> impl Strategy<Value = PropertyExpr> {
    prop_oneof![
        1 => sequence(max_delay, depth).prop_map(|seq| PropertyExpr::Seq { seq }),
        3 => (sequence(max_delay, depth), any::<bool>(), sequence(max_delay, depth)).prop_map(|(antecedent, over, consequent)| {
            PropertyExpr::Implication {
                antecedent,
                op: if over { ImplicationKind::Overlapping } else { ImplicationKind::NonOverlapping },
                consequent,
            }
        }),
    ]
}

/// Random assertion within the oracle's limits (delays <= 2 keep the
/// placement enumeration small).
pub fn assertion() -> impl Strategy<Value = AssertionAst> {
    (prop::option::of(bool_expr(2)), property(2, 3)).prop_map(|(disable, body)| AssertionAst {
        name: "p".into(),
        clock: CLOCK.into(),
        disable,
        body,
        origin: Origin::Manual,
        generate: None,
    })
}

/// Like `assertion` but may carry a generate wrapper indexing `m[t]`.
pub fn printable_assertion() -> impl Strategy<Value = AssertionAst> {
    (assertion(), any::<bool>(), 0i64..2).prop_map(|(mut a, gen, lower)| {
        if gen {
            let idx = BoolExpr::Ident { name: "m".into(), index: Some(Index::Var("t".into())) };
            a.body = match a.body {
                PropertyExpr::Seq { mut seq } => {
                    seq.elements[0] = BoolExpr::and(seq.elements[0].clone(), idx);
                    PropertyExpr::Seq { seq }
                }
                PropertyExpr::Implication { antecedent, op, mut consequent } => {
                    consequent.elements[0] = BoolExpr::or(idx, consequent.elements[0].clone());
                    PropertyExpr::Implication { antecedent, op, consequent }
                }
            };
            a.generate = Some(GenerateBinding { loop_var: "t".into(), lower, upper: LoopBound::Param("N".into()) });
        }
        a
    })
}

fn sample() -> impl Strategy<Value = Option<u64>> {
    prop_oneof![4 => Just(Some(0)), 4 => Just(Some(1)), 1 => Just(None)]
}

pub fn trace(max_cycles: usize) -> impl Strategy<Value = Trace> {
    (1..=max_cycles)
        .prop_flat_map(|k| prop::collection::vec(prop::collection::vec(sample(), k), SIGNALS.len()))
        .prop_map(|cols| {
            let mut t = Trace::with_cycles(CLOCK, cols[0].len());
            for (name, col) in SIGNALS.iter().zip(cols) {
                t.insert(name, 1, col);
            }
            t
        })
}
