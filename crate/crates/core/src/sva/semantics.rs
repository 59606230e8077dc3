// SPDX-License-Identifier: Apache-2.0

//! Checks against a design's signal inventory, and generate-loop expansion.

use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::*;
use super::diag::{DiagCode, Diagnostic, Span};
use super::printer::pretty_print_with_spans;
use crate::verilog::{RoleHint, SignalInventory};

/// Diagnostic spans index into `pretty_print(ast)`, the only text an AST
/// is guaranteed to have.
pub fn check_semantics(ast: &AssertionAst, inventory: &SignalInventory) -> Vec<Diagnostic> {
    let (text, spans) = pretty_print_with_spans(ast);
    let mut diags = Vec::new();

    if !inventory.contains(&ast.clock) {
        let start = text.find("posedge ").map_or(0, |p| p + "posedge ".len());
        diags.push(Diagnostic::error(
            DiagCode::UnknownSignal,
            format!("clock `{}` is not declared in module `{}`", ast.clock, inventory.module_name),
            Span::new(start, start + ast.clock.len().max(1)),
        ));
    }

    let mut occurrences: Vec<(&str, Option<&Index>)> = Vec::new();
    if let Some(d) = &ast.disable {
        d.visit_idents(&mut |n, i| occurrences.push((n, i)));
    }
    for e in ast.body.exprs() {
        e.visit_idents(&mut |n, i| occurrences.push((n, i)));
    }
    debug_assert_eq!(occurrences.len(), spans.len());

    let mut reported = Vec::new();
    for ((name, index), span) in occurrences.iter().zip(&spans) {
        match inventory.get(name) {
            None if inventory.parameters.contains_key(*name) => {}
            None => {
                if !reported.contains(name) {
                    reported.push(*name);
                    diags.push(Diagnostic::error(
                        DiagCode::UnknownSignal,
                        format!("unknown signal `{name}`: not declared in module `{}`", inventory.module_name),
                        Span::new(span.start, span.start + name.len()),
                    ));
                }
            }
            Some(decl) => {
                if index.is_some() && !decl.is_array() && decl.width == 1 {
                    diags.push(Diagnostic::warning(
                        DiagCode::IndexOnScalar,
                        format!("`{name}` is a 1-bit scalar and cannot be indexed"),
                        *span,
                    ));
                }
            }
        }
    }

    if let Some(d) = &ast.disable {
        let mut resets = false;
        d.visit_idents(&mut |n, _| {
            resets |= inventory.get(n).is_some_and(|s| s.role_hint == RoleHint::Reset);
        });
        if !resets {
            let start = text.find("disable iff").unwrap_or(0);
            diags.push(Diagnostic::warning(
                DiagCode::SuspiciousReset,
                "`disable iff` condition does not reference a reset signal",
                Span::new(start, start + "disable iff".len()),
            ));
        }
    }

    for e in ast.body.exprs() {
        wide_edges(e, inventory, &text, &mut diags);
    }

    if let Some(GenerateBinding { upper: LoopBound::Param(p), .. }) = &ast.generate {
        if !inventory.parameters.contains_key(p) {
            let start = text.find(&format!("< {p}")).map_or(0, |x| x + 2);
            diags.push(Diagnostic::error(
                DiagCode::UnknownParameter,
                format!("loop bound `{p}` is not a parameter of module `{}`", inventory.module_name),
                Span::new(start, start + p.len()),
            ));
        }
    }
    diags
}

fn wide_edges(e: &BoolExpr, inv: &SignalInventory, text: &str, out: &mut Vec<Diagnostic>) {
    if let BoolExpr::Rose { expr } | BoolExpr::Fell { expr } = e {
        if let BoolExpr::Ident { name, index } = expr.as_ref() {
            if let Some(decl) = inv.get(name) {
                let wide = match index {
                    None => decl.width > 1 || decl.is_array(),
                    Some(_) => decl.is_array() && decl.width > 1,
                };
                if wide {
                    let f = if matches!(e, BoolExpr::Rose { .. }) { "$rose" } else { "$fell" };
                    let start = text.find(&format!("{f}({name}")).unwrap_or(0);
                    out.push(Diagnostic::warning(
                        DiagCode::WideEdgeArgument,
                        format!("`{f}` on multi-bit `{name}` only looks at bit 0"),
                        Span::new(start, start + f.len()),
                    ));
                }
            }
        }
    }
    for c in e.children() {
        wide_edges(c, inv, text, out);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("generate bound `{param}` of `{assertion}` has no value; pass it as a parameter")]
    UnboundParameter { assertion: String, param: String },
}

/// One assertion per loop index, `t` replaced by the literal index and the
/// name suffixed with `_<index>`.
pub fn expand_generate(ast: &AssertionAst, parameters: &BTreeMap<String, i64>) -> Result<Vec<AssertionAst>, ExpandError> {
    let Some(binding) = &ast.generate else {
        return Ok(vec![ast.clone()]);
    };
    let upper = match &binding.upper {
        LoopBound::Lit(v) => *v,
        LoopBound::Param(p) => *parameters.get(p).ok_or_else(|| ExpandError::UnboundParameter {
            assertion: ast.name.clone(),
            param: p.clone(),
        })?,
    };
    let mut out = Vec::new();
    for i in binding.lower..upper {
        let mut a = ast.clone();
        a.name = format!("{}_{i}", ast.name);
        a.generate = None;
        if let Some(d) = &mut a.disable {
            subst(d, &binding.loop_var, i);
        }
        for e in a.body.exprs_mut() {
            subst(e, &binding.loop_var, i);
        }
        out.push(a);
    }
    Ok(out)
}

/// Expands every assertion in order.
pub fn expand_all(asts: &[AssertionAst], parameters: &BTreeMap<String, i64>) -> Result<Vec<AssertionAst>, ExpandError> {
    let mut out = Vec::new();
    for a in asts {
        out.extend(expand_generate(a, parameters)?);
    }
    Ok(out)
}

fn subst(e: &mut BoolExpr, var: &str, value: i64) {
    if let BoolExpr::Ident { index: Some(idx), .. } = e {
        if matches!(idx, Index::Var(v) if v == var) {
            *idx = Index::Lit(value);
        }
    }
    for c in e.children_mut() {
        subst(c, var, value);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sva::parser::parse_assertions;
    use crate::sva::printer::pretty_print;
    use crate::verilog::extract_signals;

    fn inv() -> SignalInventory {
        extract_signals(
            "module t #(parameter N = 2) (input clk_i, input rst_ni, input active, input [11:0] prescaler,
             output [N-1:0] intr); logic [11:0] tick_count; logic [63:0] mtimecmp [N]; logic tick; endmodule",
        )
        .unwrap()
    }

    fn one(src: &str) -> AssertionAst {
        parse_assertions(src).0.remove(0)
    }

    #[test]
    fn unknown_signal_span_points_at_name() {
        let a = one("property p; @(posedge clk_i) disable iff (!rst_ni) msg_fifo_reqq && active |-> tick; endproperty assert property(p);");
        let d = check_semantics(&a, &inv());
        assert_eq!(d.len(), 1, "{d:?}");
        assert_eq!(d[0].code, DiagCode::UnknownSignal);
        let text = pretty_print(&a);
        assert_eq!(&text[d[0].span.start..d[0].span.end], "msg_fifo_reqq");
    }

    #[test]
    fn array_and_vector_indexing_is_fine() {
        let a = one("generate for (genvar t = 0; t < N; t++) begin property p; @(posedge clk_i) disable iff (!rst_ni) (mtime_ok && mtimecmp[t] > 0) |=> intr[t]; endproperty assert property(p); end endgenerate");
        let d = check_semantics(&a, &inv());
        assert!(d.iter().all(|d| d.code == DiagCode::UnknownSignal), "{d:?}");
        let d = check_semantics(&one("property p; @(posedge clk_i) tick[0]; endproperty assert property(p);"), &inv());
        assert_eq!(d[0].code, DiagCode::IndexOnScalar);
    }

    #[test]
    fn suspicious_reset() {
        let d = check_semantics(&one("property p; @(posedge clk_i) disable iff (!active) tick; endproperty assert property(p);"), &inv());
        assert_eq!(d.iter().map(|d| d.code).collect::<Vec<_>>(), [DiagCode::SuspiciousReset]);
    }

    #[test]
    fn expansion() {
        let a = one("generate for (genvar t = 0; t < N; t++) begin property interrupt_assert; @(posedge clk_i) intr[t] |-> active; endproperty assert property(interrupt_assert); end endgenerate");
        let params = BTreeMap::from([("N".to_string(), 1)]);
        let e = expand_generate(&a, &params).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].name, "interrupt_assert_0");
        assert!(pretty_print(&e[0]).contains("intr[0]"));
        assert!(matches!(expand_generate(&a, &BTreeMap::new()), Err(ExpandError::UnboundParameter { .. })));
    }
}
