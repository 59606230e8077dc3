// SPDX-License-Identifier: Apache-2.0

//! Attempt-by-attempt evaluation with sets of live sequence threads.
//!
//! An attempt starts at every cycle. A thread is `(cycle, element)`: element
//! `element` of a sequence must hold at `cycle`. Each cycle the threads due
//! now are checked; survivors spawn successors one delay later (zero delays
//! are handled in the same cycle). The attempt resolves at the first cycle
//! where its verdict no longer depends on later samples.

use std::collections::{BTreeMap, BTreeSet};

use super::{failure_message, resolve, EvalError, EvalReport, Outcome, Series, Trace};
use crate::sva::printer::print_sequence;
use crate::sva::{ArithOp, AssertionAst, BoolExpr, CmpOp, Index, PropertyExpr, SequenceExpr};

enum CExpr<'t> {
    Sig(&'t Series, Option<u32>),
    Const(i128),
    Unknown,
    Not(Box<CExpr<'t>>),
    And(Box<CExpr<'t>>, Box<CExpr<'t>>),
    Or(Box<CExpr<'t>>, Box<CExpr<'t>>),
    Cmp(CmpOp, Box<CExpr<'t>>, Box<CExpr<'t>>),
    Arith(ArithOp, Box<CExpr<'t>>, Box<CExpr<'t>>),
    Past(Box<CExpr<'t>>, usize),
    Rose(Box<CExpr<'t>>),
    Fell(Box<CExpr<'t>>),
    Stable(Box<CExpr<'t>>),
}

struct Compiler<'t, 'a> {
    trace: &'t Trace,
    assertion: &'a str,
    used: Vec<&'t Series>,
}

impl<'t> Compiler<'t, '_> {
    fn compile(&mut self, e: &BoolExpr) -> Result<CExpr<'t>, EvalError> {
        let b = |c: &mut Self, e: &BoolExpr| c.compile(e).map(Box::new);
        Ok(match e {
            BoolExpr::Ident { name, index } => {
                let idx = match index {
                    None => None,
                    Some(Index::Lit(i)) => Some(*i),
                    Some(Index::Var(_)) => {
                        return Err(EvalError::UnexpandedGenerate { assertion: self.assertion.to_string() })
                    }
                };
                let (series, bit) = resolve(self.trace, name, idx).ok_or_else(|| EvalError::SignalMissingFromTrace {
                    assertion: self.assertion.to_string(),
                    signal: match idx {
                        Some(i) => format!("{name}[{i}]"),
                        None => name.clone(),
                    },
                })?;
                if !self.used.iter().any(|s| std::ptr::eq(*s, series)) {
                    self.used.push(series);
                }
                CExpr::Sig(series, bit)
            }
            BoolExpr::Int { value } => CExpr::Const(*value as i128),
            BoolExpr::Label { .. } => CExpr::Unknown,
            BoolExpr::Not { expr } => CExpr::Not(b(self, expr)?),
            BoolExpr::And { lhs, rhs } => CExpr::And(b(self, lhs)?, b(self, rhs)?),
            BoolExpr::Or { lhs, rhs } => CExpr::Or(b(self, lhs)?, b(self, rhs)?),
            BoolExpr::Cmp { op, lhs, rhs } => CExpr::Cmp(*op, b(self, lhs)?, b(self, rhs)?),
            BoolExpr::Arith { op, lhs, rhs } => CExpr::Arith(*op, b(self, lhs)?, b(self, rhs)?),
            BoolExpr::Past { expr, depth } => CExpr::Past(b(self, expr)?, depth.unwrap_or(1) as usize),
            BoolExpr::Rose { expr } => CExpr::Rose(b(self, expr)?),
            BoolExpr::Fell { expr } => CExpr::Fell(b(self, expr)?),
            BoolExpr::Stable { expr } => CExpr::Stable(b(self, expr)?),
        })
    }
}

impl CExpr<'_> {
    fn value(&self, c: usize) -> Option<i128> {
        match self {
            CExpr::Sig(s, bit) => {
                let v = s.values[c]?;
                Some(match bit {
                    Some(b) => ((v >> b) & 1) as i128,
                    None => v as i128,
                })
            }
            CExpr::Const(v) => Some(*v),
            CExpr::Unknown => None,
            CExpr::Not(e) => e.value(c).map(|v| (v == 0) as i128),
            CExpr::And(a, b) => match (a.value(c), b.value(c)) {
                (Some(0), _) | (_, Some(0)) => Some(0),
                (Some(_), Some(_)) => Some(1),
                _ => None,
            },
            CExpr::Or(a, b) => match (a.value(c), b.value(c)) {
                (Some(x), _) | (_, Some(x)) if x != 0 => Some(1),
                (Some(_), Some(_)) => Some(0),
                _ => None,
            },
            CExpr::Cmp(op, a, b) => {
                let (x, y) = (a.value(c)?, b.value(c)?);
                Some(match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Ne => x != y,
                    CmpOp::Lt => x < y,
                    CmpOp::Le => x <= y,
                    CmpOp::Gt => x > y,
                    CmpOp::Ge => x >= y,
                } as i128)
            }
            CExpr::Arith(op, a, b) => {
                let (x, y) = (a.value(c)?, b.value(c)?);
                Some(match op {
                    ArithOp::Add => x + y,
                    ArithOp::Sub => x - y,
                })
            }
            CExpr::Past(e, d) => e.value(c.checked_sub(*d)?),
            CExpr::Rose(e) => {
                let (now, prev) = (e.value(c)?, e.value(c.checked_sub(1)?)?);
                Some((now & 1 == 1 && prev & 1 == 0) as i128)
            }
            CExpr::Fell(e) => {
                let (now, prev) = (e.value(c)?, e.value(c.checked_sub(1)?)?);
                Some((now & 1 == 0 && prev & 1 == 1) as i128)
            }
            CExpr::Stable(e) => {
                let (now, prev) = (e.value(c)?, e.value(c.checked_sub(1)?)?);
                Some((now == prev) as i128)
            }
        }
    }
}

/// A sequence with each element's truth precomputed for every cycle.
struct Table {
    lead: (usize, usize),
    delays: Vec<(usize, usize)>,
    holds: Vec<Vec<bool>>,
}

impl Table {
    fn build(seq: &SequenceExpr, exprs: &[CExpr<'_>], cycles: usize) -> Table {
        Table {
            lead: seq.lead.map_or((0, 0), |d| (d.lo as usize, d.hi as usize)),
            delays: seq.delays.iter().map(|d| (d.lo as usize, d.hi as usize)).collect(),
            holds: exprs.iter().map(|e| (0..cycles).map(|c| e.value(c).is_some_and(|v| v != 0)).collect()).collect(),
        }
    }
}

/// Live threads of one sequence match anchored at a fixed cycle.
struct Run {
    pending: BTreeSet<(usize, usize)>,
    matched: bool,
}

impl Run {
    fn start(t: &Table, anchor: usize) -> Run {
        Run { pending: (t.lead.0..=t.lead.1).map(|d| (anchor + d, 0)).collect(), matched: false }
    }

    /// Checks the threads due at `h`; true when a match ends at `h`.
    fn step(&mut self, t: &Table, h: usize) -> bool {
        let last = t.holds.len() - 1;
        let mut ended = false;
        while let Some(&(pos, i)) = self.pending.first() {
            if pos != h {
                break;
            }
            self.pending.pop_first();
            if !t.holds[i][h] {
                continue;
            }
            if i == last {
                ended = true;
            } else {
                let (lo, hi) = t.delays[i];
                for d in lo..=hi {
                    self.pending.insert((h + d, i + 1));
                }
            }
        }
        self.matched |= ended;
        ended
    }

    fn alive(&self) -> bool {
        !self.pending.is_empty()
    }
}

enum Shape {
    Seq(Table),
    Implication { ant: Table, con: Table, shift: usize },
}

/// Evaluates one (expanded) assertion on a trace.
pub fn evaluate(ast: &AssertionAst, trace: &Trace) -> Result<EvalReport, EvalError> {
    if ast.generate.is_some() {
        return Err(EvalError::UnexpandedGenerate { assertion: ast.name.clone() });
    }
    if ast.clock != trace.clock {
        return Err(EvalError::ClockMismatch {
            assertion: ast.name.clone(),
            expected: ast.clock.clone(),
            found: trace.clock.clone(),
        });
    }
    let k_max = trace.cycles();
    let mut comp = Compiler { trace, assertion: &ast.name, used: Vec::new() };
    let disable = match &ast.disable {
        Some(d) => {
            let c = comp.compile(d)?;
            (0..k_max).map(|k| c.value(k).is_some_and(|v| v != 0)).collect()
        }
        None => vec![false; k_max],
    };
    let mut compile_seq = |s: &SequenceExpr| -> Result<Table, EvalError> {
        let exprs = s.elements.iter().map(|e| comp.compile(e)).collect::<Result<Vec<_>, _>>()?;
        Ok(Table::build(s, &exprs, k_max))
    };
    let (shape, what) = match &ast.body {
        PropertyExpr::Seq { seq } => {
            (Shape::Seq(compile_seq(seq)?), format!("sequence `{}` did not match", print_sequence(seq)))
        }
        PropertyExpr::Implication { antecedent, op, consequent } => (
            Shape::Implication {
                ant: compile_seq(antecedent)?,
                con: compile_seq(consequent)?,
                shift: match op {
                    crate::sva::ImplicationKind::Overlapping => 0,
                    crate::sva::ImplicationKind::NonOverlapping => 1,
                },
            },
            format!("consequent `{}` did not hold", print_sequence(consequent)),
        ),
    };
    let used = comp.used;

    let mut report = EvalReport::new(&ast.name);
    for k in 0..k_max {
        let (verdict, resolved_at) = match &shape {
            Shape::Seq(t) => attempt_seq(t, k, k_max),
            Shape::Implication { ant, con, shift } => attempt_implication(ant, con, *shift, k, k_max),
        };
        let outcome = match resolved_at {
            Some(r) if disable[k..=r].iter().any(|d| *d) => Outcome::Disabled,
            Some(_) => verdict,
            None if disable[k..].iter().any(|d| *d) => Outcome::Disabled,
            None => Outcome::Incomplete,
        };
        report.attempts += 1;
        match outcome {
            Outcome::Pass => report.passes += 1,
            Outcome::Vacuous => report.vacuous += 1,
            Outcome::Disabled => report.disabled += 1,
            Outcome::Incomplete => report.incomplete += 1,
            Outcome::Fail => {
                let r = resolved_at.expect("failures are resolved");
                report.fails += 1;
                report.fail_cycles.push(k);
                if used.iter().any(|s| s.values[k..=r].iter().any(Option::is_none)) {
                    report.unknown_fails += 1;
                }
                if report.first_failure_message.is_none() {
                    report.first_failure_message = Some(failure_message(&ast.name, trace, k, r, &what));
                }
            }
        }
    }
    Ok(report)
}

fn attempt_seq(t: &Table, k: usize, k_max: usize) -> (Outcome, Option<usize>) {
    let mut run = Run::start(t, k);
    for h in k..k_max {
        run.step(t, h);
        if run.matched {
            return (Outcome::Pass, Some(h));
        }
        if !run.alive() {
            return (Outcome::Fail, Some(h));
        }
    }
    (Outcome::Incomplete, None)
}

fn attempt_implication(ant: &Table, con: &Table, shift: usize, k: usize, k_max: usize) -> (Outcome, Option<usize>) {
    let mut run = Run::start(ant, k);
    let mut obligations: BTreeMap<usize, Run> = BTreeMap::new();
    for h in k..k_max {
        if run.step(ant, h) {
            let anchor = h + shift;
            obligations.entry(anchor).or_insert_with(|| Run::start(con, anchor));
        }
        let mut all_passed = true;
        for ob in obligations.values_mut() {
            if ob.matched {
                continue;
            }
            ob.step(con, h);
            if !ob.matched {
                if !ob.alive() {
                    return (Outcome::Fail, Some(h));
                }
                all_passed = false;
            }
        }
        if !run.alive() {
            if !run.matched {
                return (Outcome::Vacuous, Some(h));
            }
            if all_passed {
                return (Outcome::Pass, Some(h));
            }
        }
    }
    (Outcome::Incomplete, None)
}
