// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference evaluator for small instances.
//!
//! Every placement of every sequence element is enumerated and each
//! attempt's verdict is recomputed from scratch at every horizon `h`, using
//! only cycles `<= h`. Nothing here is shared with the thread-based
//! evaluator apart from the report type.

use super::{failure_message, EvalError, EvalReport, Trace};
use crate::sva::printer::print_sequence;
use crate::sva::{ArithOp, AssertionAst, BoolExpr, CmpOp, ImplicationKind, Index, PropertyExpr, SequenceExpr};

pub const MAX_CYCLES: usize = 8;
pub const MAX_DELAY: u32 = 4;
pub const MAX_SIGNALS: usize = 4;

fn too_large(reason: String) -> EvalError {
    EvalError::InstanceTooLarge { reason }
}

fn series_name(trace: &Trace, name: &str, index: Option<&Index>) -> Option<(String, Option<u32>)> {
    match index {
        None => trace.get(name).map(|_| (name.to_string(), None)),
        Some(Index::Lit(i)) => {
            let elem = format!("{name}[{i}]");
            if trace.get(&elem).is_some() {
                Some((elem, None))
            } else {
                let w = trace.get(name)?.width as i64;
                (*i >= 0 && *i < w).then(|| (name.to_string(), Some(*i as u32)))
            }
        }
        Some(Index::Var(_)) => None,
    }
}

fn val(e: &BoolExpr, trace: &Trace, c: i64) -> Option<i128> {
    if c < 0 {
        return None;
    }
    match e {
        BoolExpr::Ident { name, index } => {
            let (s, bit) = series_name(trace, name, index.as_ref())?;
            let raw = trace.get(&s)?.values[c as usize]? as i128;
            Some(match bit {
                Some(b) => (raw >> b) & 1,
                None => raw,
            })
        }
        BoolExpr::Int { value } => Some(*value as i128),
        BoolExpr::Label { .. } => None,
        BoolExpr::Not { expr } => Some(if val(expr, trace, c)? == 0 { 1 } else { 0 }),
        BoolExpr::And { lhs, rhs } => {
            let a = val(lhs, trace, c);
            let b = val(rhs, trace, c);
            match (a, b) {
                (Some(0), _) | (_, Some(0)) => Some(0),
                (Some(_), Some(_)) => Some(1),
                _ => None,
            }
        }
        BoolExpr::Or { lhs, rhs } => {
            let a = val(lhs, trace, c);
            let b = val(rhs, trace, c);
            if a.is_some_and(|v| v != 0) || b.is_some_and(|v| v != 0) {
                return Some(1);
            }
            match (a, b) {
                (Some(_), Some(_)) => Some(0),
                _ => None,
            }
        }
        BoolExpr::Cmp { op, lhs, rhs } => {
            let a = val(lhs, trace, c)?;
            let b = val(rhs, trace, c)?;
            let r = match op {
                CmpOp::Eq => a == b,
                CmpOp::Ne => a != b,
                CmpOp::Lt => a < b,
                CmpOp::Le => a <= b,
                CmpOp::Gt => a > b,
                CmpOp::Ge => a >= b,
            };
            Some(if r { 1 } else { 0 })
        }
        BoolExpr::Arith { op, lhs, rhs } => {
            let a = val(lhs, trace, c)?;
            let b = val(rhs, trace, c)?;
            Some(if *op == ArithOp::Add { a + b } else { a - b })
        }
        BoolExpr::Past { expr, depth } => val(expr, trace, c - depth.unwrap_or(1) as i64),
        BoolExpr::Rose { expr } => {
            let now = val(expr, trace, c)? % 2;
            let before = val(expr, trace, c - 1)? % 2;
            Some(if now.abs() == 1 && before == 0 { 1 } else { 0 })
        }
        BoolExpr::Fell { expr } => {
            let now = val(expr, trace, c)? % 2;
            let before = val(expr, trace, c - 1)? % 2;
            Some(if now == 0 && before.abs() == 1 { 1 } else { 0 })
        }
        BoolExpr::Stable { expr } => {
            let now = val(expr, trace, c)?;
            let before = val(expr, trace, c - 1)?;
            Some(if now == before { 1 } else { 0 })
        }
    }
}

fn holds(e: &BoolExpr, trace: &Trace, c: usize) -> bool {
    matches!(val(e, trace, c as i64), Some(v) if v != 0)
}

/// Every vector of element positions for `seq` anchored at `anchor`.
fn placements(seq: &SequenceExpr, anchor: usize) -> Vec<Vec<usize>> {
    let (lo, hi) = seq.lead.map_or((0, 0), |d| (d.lo, d.hi));
    let mut out: Vec<Vec<usize>> = (lo..=hi).map(|d| vec![anchor + d as usize]).collect();
    for d in &seq.delays {
        let mut next = Vec::new();
        for p in &out {
            for step in d.lo..=d.hi {
                let mut q = p.clone();
                q.push(p[p.len() - 1] + step as usize);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

struct Ctx<'a> {
    seq: &'a SequenceExpr,
    trace: &'a Trace,
}

impl Ctx<'_> {
    fn failed_by(&self, p: &[usize], h: usize) -> bool {
        p.iter().zip(&self.seq.elements).any(|(&pos, e)| pos <= h && !holds(e, self.trace, pos))
    }

    fn matched_by(&self, p: &[usize], h: usize) -> bool {
        p.iter().zip(&self.seq.elements).all(|(&pos, e)| pos <= h && holds(e, self.trace, pos))
    }

    fn passes_by(&self, anchor: usize, h: usize) -> bool {
        placements(self.seq, anchor).iter().any(|p| self.matched_by(p, h))
    }

    fn fails_by(&self, anchor: usize, h: usize) -> bool {
        placements(self.seq, anchor).iter().all(|p| self.failed_by(p, h))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

fn verdict_at(ast: &AssertionAst, trace: &Trace, k: usize, h: usize) -> Option<Verdict> {
    match &ast.body {
        PropertyExpr::Seq { seq } => {
            let s = Ctx { seq, trace };
            if s.passes_by(k, h) {
                Some(Verdict::Pass)
            } else if s.fails_by(k, h) {
                Some(Verdict::Fail)
            } else {
                None
            }
        }
        PropertyExpr::Implication { antecedent, op, consequent } => {
            let a = Ctx { seq: antecedent, trace };
            let c = Ctx { seq: consequent, trace };
            let shift = if *op == ImplicationKind::NonOverlapping { 1 } else { 0 };
            let ps = placements(antecedent, k);
            let matched: Vec<&Vec<usize>> = ps.iter().filter(|p| a.matched_by(p, h)).collect();
            if matched.iter().any(|p| c.fails_by(p[p.len() - 1] + shift, h)) {
                return Some(Verdict::Fail);
            }
            if ps.iter().all(|p| a.failed_by(p, h)) {
                return Some(Verdict::Vacuous);
            }
            let settled = ps.iter().all(|p| a.failed_by(p, h) || a.matched_by(p, h));
            if settled && !matched.is_empty() && matched.iter().all(|p| c.passes_by(p[p.len() - 1] + shift, h)) {
                return Some(Verdict::Pass);
            }
            None
        }
    }
}

fn check_bounds(ast: &AssertionAst, trace: &Trace) -> Result<Vec<String>, EvalError> {
    if trace.cycles() > MAX_CYCLES {
        return Err(too_large(format!("{} cycles > {MAX_CYCLES}", trace.cycles())));
    }
    let seqs: Vec<&SequenceExpr> = match &ast.body {
        PropertyExpr::Seq { seq } => vec![seq],
        PropertyExpr::Implication { antecedent, consequent, .. } => vec![antecedent, consequent],
    };
    for s in seqs {
        for d in s.lead.iter().chain(&s.delays) {
            if d.hi > MAX_DELAY {
                return Err(too_large(format!("delay bound {} > {MAX_DELAY}", d.hi)));
            }
        }
    }
    let mut names: Vec<String> = Vec::new();
    let mut missing = None;
    let mut visit = |e: &BoolExpr| {
        e.visit_idents(&mut |n, idx| {
            match series_name(trace, n, idx) {
                Some((s, _)) => {
                    if !names.contains(&s) {
                        names.push(s);
                    }
                }
                None => {
                    if missing.is_none() {
                        missing = Some(match idx {
                            Some(Index::Lit(i)) => format!("{n}[{i}]"),
                            Some(Index::Var(v)) => format!("{n}[{v}]"),
                            None => n.to_string(),
                        });
                    }
                }
            }
        })
    };
    if let Some(d) = &ast.disable {
        visit(d);
    }
    for e in ast.body.exprs() {
        visit(e);
    }
    if let Some(signal) = missing {
        return Err(EvalError::SignalMissingFromTrace { assertion: ast.name.clone(), signal });
    }
    if names.len() > MAX_SIGNALS {
        return Err(too_large(format!("{} signals > {MAX_SIGNALS}", names.len())));
    }
    Ok(names)
}

pub fn oracle_evaluate(ast: &AssertionAst, trace: &Trace) -> Result<EvalReport, EvalError> {
    if ast.generate.is_some() || !ast.index_vars().is_empty() {
        return Err(EvalError::UnexpandedGenerate { assertion: ast.name.clone() });
    }
    if ast.clock != trace.clock {
        return Err(EvalError::ClockMismatch {
            assertion: ast.name.clone(),
            expected: ast.clock.clone(),
            found: trace.clock.clone(),
        });
    }
    let names = check_bounds(ast, trace)?;
    let n = trace.cycles();
    let disabled_at = |c: usize| ast.disable.as_ref().is_some_and(|d| holds(d, trace, c));
    let what = match &ast.body {
        PropertyExpr::Seq { seq } => format!("sequence `{}` did not match", print_sequence(seq)),
        PropertyExpr::Implication { consequent, .. } => format!("consequent `{}` did not hold", print_sequence(consequent)),
    };

    let mut report = EvalReport::new(&ast.name);
    for k in 0..n {
        report.attempts += 1;
        let resolved = (k..n).find_map(|h| verdict_at(ast, trace, k, h).map(|v| (v, h)));
        let last = resolved.map_or(n - 1, |(_, h)| h);
        if (k..=last).any(disabled_at) {
            report.disabled += 1;
            continue;
        }
        match resolved {
            None => report.incomplete += 1,
            Some((Verdict::Pass, _)) => report.passes += 1,
            Some((Verdict::Vacuous, _)) => report.vacuous += 1,
            Some((Verdict::Fail, h)) => {
                report.fails += 1;
                report.fail_cycles.push(k);
                let saw_unknown =
                    names.iter().any(|s| (k..=h).any(|c| trace.get(s).is_some_and(|ser| ser.values[c].is_none())));
                if saw_unknown {
                    report.unknown_fails += 1;
                }
                if report.first_failure_message.is_none() {
                    report.first_failure_message = Some(failure_message(&ast.name, trace, k, h, &what));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sva::parse_assertions;

    fn one(src: &str) -> AssertionAst {
        parse_assertions(src).0.remove(0)
    }

    fn small() -> Trace {
        let mut t = Trace::with_cycles("clk", 5);
        t.insert("a", 1, vec![Some(1), None, Some(0), Some(1), Some(1)]);
        t
    }

    #[test]
    fn tautology_and_contradiction() {
        let t = small();
        let r = oracle_evaluate(&one("property p; @(posedge clk) 1 |-> 1; endproperty assert property(p);"), &t).unwrap();
        assert_eq!(r.passes, r.attempts - r.incomplete);
        let r = oracle_evaluate(&one("property p; @(posedge clk) 1 |-> 0; endproperty assert property(p);"), &t).unwrap();
        assert_eq!(r.fails, r.attempts - r.incomplete);
        assert_eq!(r.unknown_fails, 0);
    }

    #[test]
    fn bounds_enforced() {
        let t = small();
        let long = one("property p; @(posedge clk) a ##5 a; endproperty assert property(p);");
        assert!(matches!(oracle_evaluate(&long, &t), Err(EvalError::InstanceTooLarge { .. })));
        let big = Trace::with_cycles("clk", 9);
        let p = one("property p; @(posedge clk) 1; endproperty assert property(p);");
        assert!(matches!(oracle_evaluate(&p, &big), Err(EvalError::InstanceTooLarge { .. })));
    }
}
