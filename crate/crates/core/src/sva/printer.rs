// SPDX-License-Identifier: Apache-2.0

//! Canonical text form. `parse_assertions(pretty_print(a))` gives back `a`.

use std::fmt::Write;

use super::ast::*;
use super::diag::Span;

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_EQ: u8 = 3;
const PREC_REL: u8 = 4;
const PREC_ADD: u8 = 5;
const PREC_UNARY: u8 = 6;

fn prec(e: &BoolExpr) -> u8 {
    match e {
        BoolExpr::Or { .. } => PREC_OR,
        BoolExpr::And { .. } => PREC_AND,
        BoolExpr::Cmp { op, .. } if op.is_equality() => PREC_EQ,
        BoolExpr::Cmp { .. } => PREC_REL,
        BoolExpr::Arith { .. } => PREC_ADD,
        BoolExpr::Not { .. } => PREC_UNARY,
        BoolExpr::Int { value } if *value < 0 => PREC_UNARY,
        _ => PREC_UNARY + 1,
    }
}

fn is_atomic(e: &BoolExpr) -> bool {
    prec(e) > PREC_UNARY
}

#[derive(Default)]
struct Printer {
    buf: String,
    idents: Vec<Span>,
}

impl Printer {
    fn expr(&mut self, e: &BoolExpr, min_prec: u8) {
        let p = prec(e);
        let paren = p < min_prec;
        if paren {
            self.buf.push('(');
        }
        match e {
            BoolExpr::Ident { name, index } => {
                let start = self.buf.len();
                self.buf.push_str(name);
                match index {
                    Some(Index::Lit(i)) => write!(self.buf, "[{i}]").unwrap(),
                    Some(Index::Var(v)) => write!(self.buf, "[{v}]").unwrap(),
                    None => {}
                }
                self.idents.push(Span::new(start, self.buf.len()));
            }
            BoolExpr::Int { value } => write!(self.buf, "{value}").unwrap(),
            BoolExpr::Label { text } => write!(self.buf, "'{text}'").unwrap(),
            BoolExpr::Not { expr } => {
                self.buf.push('!');
                self.expr(expr, PREC_UNARY);
            }
            BoolExpr::And { lhs, rhs } => self.binary(lhs, "&&", rhs, PREC_AND),
            BoolExpr::Or { lhs, rhs } => self.binary(lhs, "||", rhs, PREC_OR),
            BoolExpr::Cmp { op, lhs, rhs } => self.binary(lhs, op.symbol(), rhs, p),
            BoolExpr::Arith { op, lhs, rhs } => self.binary(lhs, op.symbol(), rhs, PREC_ADD),
            BoolExpr::Past { expr, depth } => {
                self.buf.push_str("$past(");
                self.expr(expr, 0);
                if let Some(d) = depth {
                    write!(self.buf, ", {d}").unwrap();
                }
                self.buf.push(')');
            }
            BoolExpr::Rose { expr } => self.call("$rose", expr),
            BoolExpr::Fell { expr } => self.call("$fell", expr),
            BoolExpr::Stable { expr } => self.call("$stable", expr),
        }
        if paren {
            self.buf.push(')');
        }
    }

    fn binary(&mut self, lhs: &BoolExpr, op: &str, rhs: &BoolExpr, p: u8) {
        self.expr(lhs, p);
        write!(self.buf, " {op} ").unwrap();
        self.expr(rhs, p + 1);
    }

    fn call(&mut self, f: &str, e: &BoolExpr) {
        self.buf.push_str(f);
        self.buf.push('(');
        self.expr(e, 0);
        self.buf.push(')');
    }

    fn delay(&mut self, d: DelayRange) {
        if d.lo == d.hi {
            write!(self.buf, "##{}", d.lo).unwrap();
        } else {
            write!(self.buf, "##[{}:{}]", d.lo, d.hi).unwrap();
        }
    }

    fn sequence(&mut self, s: &SequenceExpr, wrap_compound: bool) {
        if let Some(d) = s.lead {
            self.delay(d);
            self.buf.push(' ');
        }
        for (i, e) in s.elements.iter().enumerate() {
            if i > 0 {
                self.buf.push(' ');
                self.delay(s.delays[i - 1]);
                self.buf.push(' ');
            }
            if wrap_compound && !is_atomic(e) {
                self.buf.push('(');
                self.expr(e, 0);
                self.buf.push(')');
            } else {
                self.expr(e, 0);
            }
        }
    }

    fn property(&mut self, p: &PropertyExpr) {
        match p {
            PropertyExpr::Seq { seq } => self.sequence(seq, seq.elements.len() > 1),
            PropertyExpr::Implication { antecedent, op, consequent } => {
                self.sequence(antecedent, true);
                write!(self.buf, " {} ", op.symbol()).unwrap();
                self.sequence(consequent, true);
            }
        }
    }

    fn assertion(&mut self, a: &AssertionAst) {
        let indent = if let Some(g) = &a.generate {
            let upper = match &g.upper {
                LoopBound::Lit(v) => v.to_string(),
                LoopBound::Param(p) => p.clone(),
            };
            let v = &g.loop_var;
            writeln!(self.buf, "generate").unwrap();
            writeln!(self.buf, "for (genvar {v} = {}; {v} < {upper}; {v}++) begin : gen_{}", g.lower, a.name).unwrap();
            "  "
        } else {
            ""
        };
        writeln!(self.buf, "{indent}property {};", a.name).unwrap();
        write!(self.buf, "{indent}  @(posedge {})", a.clock).unwrap();
        if let Some(d) = &a.disable {
            self.buf.push_str(" disable iff (");
            self.expr(d, 0);
            self.buf.push(')');
        }
        self.buf.push(' ');
        self.property(&a.body);
        self.buf.push_str(";\n");
        writeln!(self.buf, "{indent}endproperty").unwrap();
        write!(self.buf, "{indent}assert property ({});", a.name).unwrap();
        if a.generate.is_some() {
            self.buf.push_str("\nend\nendgenerate");
        }
    }
}

pub fn pretty_print(a: &AssertionAst) -> String {
    let mut p = Printer::default();
    p.assertion(a);
    p.buf
}

/// Printed text plus the span of every identifier occurrence, in the order
/// `AssertionAst::signal_names` visits them (disable condition first).
pub fn pretty_print_with_spans(a: &AssertionAst) -> (String, Vec<Span>) {
    let mut p = Printer::default();
    p.assertion(a);
    (p.buf, p.idents)
}

pub fn print_assertions(asts: &[AssertionAst]) -> String {
    let mut out = String::new();
    for (i, a) in asts.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        out.push_str(&pretty_print(a));
    }
    out.push('\n');
    out
}

pub fn print_bool(e: &BoolExpr) -> String {
    let mut p = Printer::default();
    p.expr(e, 0);
    p.buf
}

pub fn print_sequence(s: &SequenceExpr) -> String {
    let mut p = Printer::default();
    p.sequence(s, s.elements.len() > 1);
    p.buf
}

pub fn print_property(body: &PropertyExpr) -> String {
    let mut p = Printer::default();
    p.property(body);
    p.buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sva::parser::parse_assertions;

    #[test]
    fn prints_canonical_form() {
        let (asts, _) = parse_assertions(
            "property tick_count_reset;\n( @(posedge clk_i) disable iff (!rst_ni) (!active) |-> ##1 (tick_count == 0));\nend property\nassert property(tick_count_reset);",
        );
        assert_eq!(
            pretty_print(&asts[0]),
            "property tick_count_reset;\n  @(posedge clk_i) disable iff (!rst_ni) (!active) |-> ##1 (tick_count == 0);\nendproperty\nassert property (tick_count_reset);"
        );
    }

    #[test]
    fn parens_follow_tree_shape() {
        let e = BoolExpr::arith(
            ArithOp::Sub,
            BoolExpr::ident("a"),
            BoolExpr::arith(ArithOp::Sub, BoolExpr::ident("b"), BoolExpr::int(-1)),
        );
        assert_eq!(print_bool(&e), "a - (b - -1)");
        let e = BoolExpr::not(BoolExpr::and(BoolExpr::ident("a"), BoolExpr::ident("b")));
        assert_eq!(print_bool(&e), "!(a && b)");
        let e = BoolExpr::and(BoolExpr::or(BoolExpr::ident("a"), BoolExpr::ident("b")), BoolExpr::ident("c"));
        assert_eq!(print_bool(&e), "(a || b) && c");
    }

    #[test]
    fn ident_spans() {
        let (asts, _) = parse_assertions("property p; @(posedge c) disable iff (r) a[1] |-> b; endproperty assert property(p);");
        let (text, spans) = pretty_print_with_spans(&asts[0]);
        let names: Vec<&str> = spans.iter().map(|s| &text[s.start..s.end]).collect();
        assert_eq!(names, ["r", "a[1]", "b"]);
    }
}
