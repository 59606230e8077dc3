// SPDX-License-Identifier: Apache-2.0

//! Per-design summary rows and repair-prompt counts.

use std::fmt::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compare::{match_sets, MatchReport};
use crate::orchestrator::SessionSummary;
use crate::sva::AssertionAst;
use crate::trace::Trace;

const DASH: &str = "—";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignRow {
    pub module_name: String,
    pub reference_assert_count: usize,
    pub generated_assert_count: usize,
    pub alt_assert_count: Option<usize>,
    pub common_assert_count: Option<usize>,
    /// Span of the session traces in their own timescale units.
    pub trace_time_span: u64,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("session for `{0}` did not complete")]
    SessionIncomplete(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// One table row. The common count comes from matching the session's passing
/// assertions against `alt` on `probes`.
pub fn build_row(
    session: &SessionSummary,
    reference: &[AssertionAst],
    alt: Option<&[AssertionAst]>,
    probes: &[Trace],
) -> Result<(DesignRow, Option<MatchReport>), ReportError> {
    if !session.complete {
        return Err(ReportError::SessionIncomplete(session.design.clone()));
    }
    let generated: Vec<AssertionAst> = session.passing().map(|a| a.ast.clone()).collect();
    let matched = alt.map(|alt| match_sets(&generated, alt, probes, &session.parameters));
    let row = DesignRow {
        module_name: session.design.clone(),
        reference_assert_count: reference.len(),
        generated_assert_count: generated.len(),
        alt_assert_count: alt.map(<[_]>::len),
        common_assert_count: matched.as_ref().map(|m| m.count),
        trace_time_span: session.traces.iter().map(|t| t.time_span).max().unwrap_or(0),
    };
    Ok((row, matched))
}

fn cell(v: Option<usize>) -> String {
    v.map_or_else(|| DASH.to_string(), |n| n.to_string())
}

pub fn render_markdown(rows: &[DesignRow]) -> String {
    let mut out = String::from(
        "| Module | Reference | Generated | Alt | Common | Trace span¹ |\n|---|---|---|---|---|---|\n",
    );
    for r in rows {
        writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.module_name,
            r.reference_assert_count,
            r.generated_assert_count,
            cell(r.alt_assert_count),
            cell(r.common_assert_count),
            r.trace_time_span
        )
        .unwrap();
    }
    out.push_str("\n¹ Locally measured: time span of this run's own traces, in trace timescale units.\n");
    out
}

pub fn render_csv(rows: &[DesignRow]) -> String {
    let mut out = String::from("module,reference,generated,alt,common,trace_time_span\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.module_name,
            r.reference_assert_count,
            r.generated_assert_count,
            cell(r.alt_assert_count),
            cell(r.common_assert_count),
            r.trace_time_span
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRow {
    pub design: String,
    pub tool: String,
    pub total_error_feedback_prompts: u32,
    /// Where the replies came from, e.g. "replay-fixture" or "live".
    pub source: String,
}

/// Sums the repair prompts of each session.
pub fn iteration_histogram(sessions: &[(SessionSummary, String)]) -> Vec<IterationRow> {
    sessions
        .iter()
        .map(|(s, source)| IterationRow {
            design: s.design.clone(),
            tool: s.tool.clone(),
            total_error_feedback_prompts: s.total_feedback_prompts(),
            source: source.clone(),
        })
        .collect()
}

pub fn render_iterations_csv(rows: &[IterationRow]) -> String {
    let mut out = String::from("design,tool,total_error_feedback_prompts,source\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.design, r.tool, r.total_error_feedback_prompts, r.source).unwrap();
    }
    out
}

/// Writes report.md, report.csv and iterations.csv into `dir`.
pub fn write_reports(dir: &Path, rows: &[DesignRow], iterations: &[IterationRow]) -> Result<(), ReportError> {
    let io = |p: &Path, source| ReportError::Io { path: p.display().to_string(), source };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    for (name, body) in [
        ("report.md", render_markdown(rows)),
        ("report.csv", render_csv(rows)),
        ("iterations.csv", render_iterations_csv(iterations)),
    ] {
        let p = dir.join(name);
        std::fs::write(&p, body).map_err(|e| io(&p, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orchestrator::log::TraceInfo;
    use crate::orchestrator::{AssertionSummary, Status};
    use crate::sva::parse_assertions;

    fn summary(statuses: &[(Status, u32)], complete: bool) -> SessionSummary {
        let (asts, _) = parse_assertions("property p; @(posedge clk) a; endproperty assert property (p);");
        SessionSummary {
            design: "d".into(),
            tool: "generated".into(),
            complete,
            traces: vec![
                TraceInfo { name: "a".into(), cycles: 3, time_span: 40 },
                TraceInfo { name: "b".into(), cycles: 9, time_span: 90 },
            ],
            parameters: Default::default(),
            assertions: statuses
                .iter()
                .map(|&(status, iterations_used)| AssertionSummary {
                    name: "p".into(),
                    status,
                    iterations_used,
                    ast: asts[0].clone(),
                })
                .collect(),
        }
    }

    #[test]
    fn incomplete_session_rejected() {
        assert!(matches!(build_row(&summary(&[], false), &[], None, &[]), Err(ReportError::SessionIncomplete(_))));
    }

    #[test]
    fn no_alt_renders_dash() {
        let (row, m) = build_row(&summary(&[(Status::Abandoned, 2)], true), &[], None, &[]).unwrap();
        assert!(m.is_none());
        assert_eq!(row.generated_assert_count, 0);
        assert_eq!(row.trace_time_span, 90);
        assert!(render_markdown(std::slice::from_ref(&row)).contains("| d | 0 | 0 | — | — | 90 |"));
        assert!(render_csv(&[row]).ends_with("d,0,0,—,—,90\n"));
    }

    #[test]
    fn histogram() {
        assert_eq!(render_iterations_csv(&iteration_histogram(&[])), "design,tool,total_error_feedback_prompts,source\n");
        let s = summary(&[(Status::Passing, 0), (Status::Passing, 0)], true);
        let rows = iteration_histogram(&[(s, "live".into())]);
        assert_eq!(rows[0].total_error_feedback_prompts, 0);
        let s = summary(&[(Status::Passing, 1), (Status::Abandoned, 3)], true);
        assert_eq!(iteration_histogram(&[(s, "live".into())])[0].total_error_feedback_prompts, 4);
    }
}
