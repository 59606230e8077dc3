// SPDX-License-Identifier: Apache-2.0

//! Canonical form for structural comparison.
//!
//! `|=>` becomes `|-> ##1`, operands of `&&`, `||`, `==`, `!=` are sorted by
//! their printed form, `!!e` collapses where that cannot change a value, and
//! `$past(e)` gets an explicit depth. The disable condition and the
//! antecedent are normalized separately; nothing moves between them.

use super::ast::*;
use super::printer::print_bool;

pub fn normalize(ast: &AssertionAst) -> AssertionAst {
    let mut out = ast.clone();
    if let Some(d) = &mut out.disable {
        *d = norm(d, true);
    }
    for e in out.body.exprs_mut() {
        *e = norm(e, true);
    }
    if let PropertyExpr::Implication { op, consequent, .. } = &mut out.body {
        if *op == ImplicationKind::NonOverlapping {
            *op = ImplicationKind::Overlapping;
            consequent.lead = Some(match consequent.lead {
                Some(d) => d.plus(DelayRange::fixed(1)),
                None => DelayRange::fixed(1),
            });
        }
    }
    out
}

/// Value is always 0, 1 or unknown.
fn is_boolean_valued(e: &BoolExpr) -> bool {
    matches!(
        e,
        BoolExpr::Not { .. }
            | BoolExpr::And { .. }
            | BoolExpr::Or { .. }
            | BoolExpr::Cmp { .. }
            | BoolExpr::Rose { .. }
            | BoolExpr::Fell { .. }
            | BoolExpr::Stable { .. }
    )
}

/// `truth_ctx`: only the truthiness of `e` is observed (sequence element,
/// operand of a logical operator, disable condition).
pub fn norm_bool(e: &BoolExpr) -> BoolExpr {
    norm(e, true)
}

fn norm(e: &BoolExpr, truth_ctx: bool) -> BoolExpr {
    match e {
        BoolExpr::Ident { .. } | BoolExpr::Int { .. } | BoolExpr::Label { .. } => e.clone(),
        BoolExpr::Not { expr } => {
            let inner = norm(expr, true);
            match inner {
                BoolExpr::Not { expr: x } if truth_ctx || is_boolean_valued(&x) => *x,
                other => BoolExpr::not(other),
            }
        }
        BoolExpr::And { .. } => rebuild_chain(e, true),
        BoolExpr::Or { .. } => rebuild_chain(e, false),
        BoolExpr::Cmp { op, lhs, rhs } => {
            let mut l = norm(lhs, false);
            let mut r = norm(rhs, false);
            if op.is_equality() && print_bool(&r) < print_bool(&l) {
                std::mem::swap(&mut l, &mut r);
            }
            BoolExpr::cmp(*op, l, r)
        }
        BoolExpr::Arith { op, lhs, rhs } => BoolExpr::arith(*op, norm(lhs, false), norm(rhs, false)),
        BoolExpr::Past { expr, depth } => BoolExpr::past(norm(expr, false), Some(depth.unwrap_or(1))),
        BoolExpr::Rose { expr } => BoolExpr::Rose { expr: Box::new(norm(expr, false)) },
        BoolExpr::Fell { expr } => BoolExpr::Fell { expr: Box::new(norm(expr, false)) },
        BoolExpr::Stable { expr } => BoolExpr::Stable { expr: Box::new(norm(expr, false)) },
    }
}

fn rebuild_chain(e: &BoolExpr, is_and: bool) -> BoolExpr {
    let mut raw = Vec::new();
    collect(e, is_and, &mut raw);
    let mut leaves = Vec::new();
    for r in raw {
        // a leaf can turn into the same operator after `!!` removal
        let n = norm(r, true);
        let same = matches!((&n, is_and), (BoolExpr::And { .. }, true) | (BoolExpr::Or { .. }, false));
        if same {
            collect_owned(n, is_and, &mut leaves);
        } else {
            leaves.push(n);
        }
    }
    let mut keyed: Vec<(String, BoolExpr)> = leaves.into_iter().map(|l| (print_bool(&l), l)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut it = keyed.into_iter().map(|(_, l)| l);
    let first = it.next().expect("chain has operands");
    it.fold(first, |acc, l| if is_and { BoolExpr::and(acc, l) } else { BoolExpr::or(acc, l) })
}

fn collect<'a>(e: &'a BoolExpr, is_and: bool, out: &mut Vec<&'a BoolExpr>) {
    match (e, is_and) {
        (BoolExpr::And { lhs, rhs }, true) | (BoolExpr::Or { lhs, rhs }, false) => {
            collect(lhs, is_and, out);
            collect(rhs, is_and, out);
        }
        _ => out.push(e),
    }
}

fn collect_owned(e: BoolExpr, is_and: bool, out: &mut Vec<BoolExpr>) {
    match (e, is_and) {
        (BoolExpr::And { lhs, rhs }, true) | (BoolExpr::Or { lhs, rhs }, false) => {
            collect_owned(*lhs, is_and, out);
            collect_owned(*rhs, is_and, out);
        }
        (e, _) => out.push(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sva::parser::parse_assertions;
    use crate::sva::printer::print_property;

    fn body(src: &str) -> String {
        let (asts, _) = parse_assertions(&format!("property p; @(posedge c) {src}; endproperty assert property(p);"));
        print_property(&normalize(&asts[0]).body)
    }

    #[test]
    fn desugars_and_sorts() {
        assert_eq!(
            body("(rst_ni && active && (tick_count < prescaler)) |=> (tick_count == $past(tick_count) + 1)"),
            "(active && rst_ni && tick_count < prescaler) |-> ##1 ($past(tick_count, 1) + 1 == tick_count)"
        );
        assert_eq!(body("a |=> ##[1:2] b"), "a |-> ##[2:3] b");
    }

    #[test]
    fn double_negation() {
        assert_eq!(body("!(!tick)"), "tick");
        assert_eq!(body("a && !!(c && b)"), "a && b && c");
        // numeric context keeps it: !!a is 0/1 while a may be wider
        assert_eq!(body("!!a == 1"), "!!a == 1");
        assert_eq!(body("!!(a < b) == 1"), "1 == a < b");
    }

    #[test]
    fn idempotent_on_example() {
        let (asts, _) = parse_assertions(
            "property p; @(posedge c) disable iff (!(!r) || x) (b || a) && !!c |=> $past(q) != p; endproperty assert property(p);",
        );
        let once = normalize(&asts[0]);
        assert_eq!(normalize(&once), once);
    }
}
