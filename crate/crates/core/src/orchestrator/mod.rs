// SPDX-License-Identifier: Apache-2.0

//! The generation and repair loop: seed the model with reference material,
//! ask for assertions from the specification, resynchronize names against
//! the RTL once, then check each assertion on the traces and feed failures
//! back one assertion at a time.

pub mod backend;
pub mod classify;
pub mod config;
pub mod extract;
pub mod log;
pub mod prompt;

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sva::{
    check_semantics, expand_generate, parse_assertions, pretty_print, print_assertions, AssertionAst,
    AssertionSet, DiagCode, Diagnostic, Origin, Span,
};
use crate::trace::{evaluate, EvalError, EvalReport, Trace};
use crate::verilog::{extract_signals_with, ExtractOptions, SignalInventory};

pub use backend::{BackendError, ChatMessage, LlmBackend, ReplayBackend, Role};
pub use classify::{classify_failure, FailureClass, ReferenceSet};
pub use config::{load_config, BackendKind, SessionConfig};
pub use extract::extract_sva;
pub use log::{LogEvent, LogRecord, SessionLog, TraceInfo};
pub use prompt::{build_prompt, Feedback, Payload, PromptError, PromptRecord, Stage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Raw,
    Failing,
    Passing,
    Abandoned,
    SuspectedDesignBug,
}

impl Status {
    pub fn can_move_to(self, to: Status) -> bool {
        use Status::*;
        matches!(
            (self, to),
            (Raw, Failing) | (Raw, Passing) | (Failing, Failing | Passing | Abandoned | SuspectedDesignBug)
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Raw => "raw",
            Status::Failing => "failing",
            Status::Passing => "passing",
            Status::Abandoned => "abandoned",
            Status::SuspectedDesignBug => "suspected_design_bug",
        }
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, Status::Passing | Status::Abandoned | Status::SuspectedDesignBug)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmResponse {
    pub raw: String,
    pub extracted_blocks: Vec<String>,
    pub backend_id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssertionState {
    pub name: String,
    pub ast: AssertionAst,
    pub status: Status,
    pub iterations_used: u32,
    pub last_report: Option<EvalReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssertionSummary {
    pub name: String,
    pub status: Status,
    pub iterations_used: u32,
    pub ast: AssertionAst,
}

/// What a finished session leaves behind for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub design: String,
    pub tool: String,
    pub complete: bool,
    pub traces: Vec<TraceInfo>,
    /// Design parameters used to expand generate blocks.
    #[serde(default)]
    pub parameters: BTreeMap<String, i64>,
    pub assertions: Vec<AssertionSummary>,
}

impl SessionSummary {
    pub fn passing(&self) -> impl Iterator<Item = &AssertionSummary> {
        self.assertions.iter().filter(|a| a.status == Status::Passing)
    }

    pub fn total_feedback_prompts(&self) -> u32 {
        self.assertions.iter().map(|a| a.iterations_used).sum()
    }
}

pub struct SessionInputs {
    pub spec: String,
    pub block_diagram: Option<String>,
    pub rtl: String,
    /// (name, text) of each context document.
    pub context: Vec<(String, String)>,
    /// (name, trace) pairs checked for every assertion.
    pub traces: Vec<(String, Trace)>,
    pub references: Vec<AssertionAst>,
}

#[derive(Debug)]
pub struct RefinementSession {
    pub design: String,
    pub config: SessionConfig,
    pub inventory: SignalInventory,
    pub parameters: BTreeMap<String, i64>,
    /// The context seed, sent as the system message of every request.
    pub system_prompt: Option<PromptRecord>,
    pub history: Vec<(PromptRecord, LlmResponse)>,
    pub assertions: Vec<AssertionState>,
    pub traces: Vec<TraceInfo>,
    pub complete: bool,
}

impl RefinementSession {
    pub fn get(&self, name: &str) -> Option<&AssertionState> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            design: self.design.clone(),
            tool: self.config.tool.clone(),
            complete: self.complete,
            traces: self.traces.clone(),
            parameters: self.parameters.clone(),
            assertions: self
                .assertions
                .iter()
                .map(|a| AssertionSummary {
                    name: a.name.clone(),
                    status: a.status,
                    iterations_used: a.iterations_used,
                    ast: a.ast.clone(),
                })
                .collect(),
        }
    }

    /// Assertions that ended passing, as a set for comparison.
    pub fn passing_set(&self) -> AssertionSet {
        let asts = self.assertions.iter().filter(|a| a.status == Status::Passing).map(|a| a.ast.clone()).collect();
        AssertionSet::new(&self.config.tool, &self.design, asts)
    }

    fn messages(&self, next: &str) -> Vec<ChatMessage> {
        let mut m = Vec::with_capacity(self.history.len() * 2 + 2);
        if let Some(s) = &self.system_prompt {
            m.push(ChatMessage { role: Role::System, content: s.body.clone() });
        }
        for (p, r) in &self.history {
            m.push(ChatMessage { role: Role::User, content: p.body.clone() });
            m.push(ChatMessage { role: Role::Assistant, content: r.raw.clone() });
        }
        m.push(ChatMessage { role: Role::User, content: next.to_string() });
        m
    }
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("invalid session input: {0}")]
    Input(String),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Log(#[from] log::LogError),
    #[error("stopped at the confirmation prompt")]
    Stopped,
}

/// Decision taken on a feedback prompt before it is sent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Review {
    Send,
    Replace(String),
    Stop,
}

pub trait ConfirmGate {
    fn review(&mut self, prompt: &PromptRecord) -> Review;
}

pub struct AutoApprove;

impl ConfirmGate for AutoApprove {
    fn review(&mut self, _prompt: &PromptRecord) -> Review {
        Review::Send
    }
}

/// Shows each feedback prompt and reads a decision: empty line or `y`
/// sends, `e` reads a replacement body terminated by a line with a single
/// `.`, `q` stops.
pub struct TerminalGate<R, W> {
    input: R,
    output: W,
}

impl<R: BufRead, W: Write> TerminalGate<R, W> {
    pub fn new(input: R, output: W) -> Self {
        TerminalGate { input, output }
    }
}

impl<R: BufRead, W: Write> ConfirmGate for TerminalGate<R, W> {
    fn review(&mut self, prompt: &PromptRecord) -> Review {
        let _ = writeln!(self.output, "---- {} prompt ----\n{}\n----", prompt.stage.as_str(), prompt.body);
        loop {
            let _ = write!(self.output, "send [y], edit [e], quit [q]? ");
            let _ = self.output.flush();
            let mut line = String::new();
            if self.input.read_line(&mut line).unwrap_or(0) == 0 {
                return Review::Stop;
            }
            match line.trim() {
                "" | "y" => return Review::Send,
                "q" => return Review::Stop,
                "e" => {
                    let mut body = String::new();
                    loop {
                        let mut l = String::new();
                        if self.input.read_line(&mut l).unwrap_or(0) == 0 || l.trim_end() == "." {
                            break;
                        }
                        body.push_str(&l);
                    }
                    return Review::Replace(body);
                }
                _ => {}
            }
        }
    }
}

/// Sends `prompt` with the whole conversation so far and records the reply.
pub fn query_llm(
    session: &mut RefinementSession,
    prompt: PromptRecord,
    backend: &mut dyn LlmBackend,
    log: &mut SessionLog,
) -> Result<LlmResponse, SessionError> {
    log.append(LogEvent::Prompt {
        stage: prompt.stage,
        iteration: prompt.iteration,
        assertion: prompt.assertion.clone(),
        body: prompt.body.clone(),
    })?;
    let messages = session.messages(&prompt.body);
    let raw = backend.query(&messages)?;
    let blocks: Vec<String> = extract_sva(&raw).into_iter().map(str::to_string).collect();
    let resp = LlmResponse { raw, extracted_blocks: blocks, backend_id: backend.id().to_string() };
    log.append(LogEvent::Response {
        backend: resp.backend_id.clone(),
        raw: resp.raw.clone(),
        blocks: resp.extracted_blocks.clone(),
    })?;
    session.history.push((prompt, resp.clone()));
    Ok(resp)
}

/// Parses every extracted block; returns the assertions and the rendered
/// error diagnostics.
fn parse_response(resp: &LlmResponse) -> (Vec<AssertionAst>, Vec<String>) {
    let mut asts = Vec::new();
    let mut errors = Vec::new();
    for block in &resp.extracted_blocks {
        let (a, d) = parse_assertions(block);
        asts.extend(a.into_iter().map(|a| a.with_origin(Origin::Llm)));
        errors.extend(d.iter().filter(|d| d.is_error()).map(|d| d.render(Some(block))));
    }
    if resp.extracted_blocks.is_empty() {
        errors.push(
            Diagnostic::error(DiagCode::UnexpectedEof, "reply contains no assertion code", Span::new(0, 1)).render(None),
        );
    }
    let mut seen = std::collections::BTreeSet::new();
    asts.retain(|a| seen.insert(a.name.clone()));
    (asts, errors)
}

/// Result of checking one assertion against the inventory and all traces.
struct Check {
    errors: Vec<Diagnostic>,
    /// Rendered error diagnostics.
    rendered: Vec<String>,
    report: Option<EvalReport>,
}

fn eval_diag(e: &EvalError) -> Diagnostic {
    let code = match e {
        EvalError::SignalMissingFromTrace { .. } => DiagCode::SignalMissingFromTrace,
        EvalError::ClockMismatch { .. } => DiagCode::ClockMismatch,
        _ => DiagCode::UnsupportedConstruct,
    };
    Diagnostic::error(code, e.to_string(), Span::new(0, 1))
}

fn merge(into: &mut EvalReport, r: EvalReport) {
    into.attempts += r.attempts;
    into.passes += r.passes;
    into.fails += r.fails;
    into.vacuous += r.vacuous;
    into.disabled += r.disabled;
    into.incomplete += r.incomplete;
    into.unknown_fails += r.unknown_fails;
    into.fail_cycles.extend(r.fail_cycles);
    if into.first_failure_message.is_none() {
        into.first_failure_message = r.first_failure_message;
    }
}

fn check(
    ast: &AssertionAst,
    inventory: &SignalInventory,
    parameters: &BTreeMap<String, i64>,
    traces: &[(String, Trace)],
) -> Check {
    let text = pretty_print(ast);
    let errors: Vec<Diagnostic> = check_semantics(ast, inventory).into_iter().filter(|d| d.is_error()).collect();
    if !errors.is_empty() {
        let rendered = errors.iter().map(|d| d.render(Some(&text))).collect();
        return Check { errors, rendered, report: None };
    }
    let expanded = match expand_generate(ast, parameters) {
        Ok(v) => v,
        Err(e) => {
            let d = Diagnostic::error(DiagCode::UnknownParameter, e.to_string(), Span::new(0, 1));
            return Check { rendered: vec![d.render(None)], errors: vec![d], report: None };
        }
    };
    let mut total = EvalReport::new(&ast.name);
    let mut errors = Vec::new();
    for inst in &expanded {
        for (_, trace) in traces {
            match evaluate(inst, trace) {
                Ok(r) => merge(&mut total, r),
                Err(e) => {
                    let d = eval_diag(&e);
                    if !errors.contains(&d) {
                        errors.push(d);
                    }
                }
            }
        }
    }
    let rendered = errors.iter().map(|d| d.render(None)).collect();
    let report = errors.is_empty().then_some(total);
    Check { errors, rendered, report }
}

fn transition(log: &mut SessionLog, st: &mut AssertionState, to: Status) -> Result<(), SessionError> {
    debug_assert!(st.status.can_move_to(to), "{:?} -> {to:?}", st.status);
    log.append(LogEvent::Status {
        assertion: st.name.clone(),
        from: Some(st.status),
        to,
        iterations_used: st.iterations_used,
    })?;
    st.status = to;
    Ok(())
}

fn vacuity_message(name: &str, r: &EvalReport) -> String {
    format!(
        "assertion `{name}` never passed a non-vacuous attempt: {} attempts, {} vacuous, {} disabled, {} incomplete",
        r.attempts, r.vacuous, r.disabled, r.incomplete
    )
}

/// Runs the whole flow. The log receives a record after every step, so an
/// interrupted session can be resumed from it.
pub fn run_session(
    inputs: &SessionInputs,
    config: &SessionConfig,
    backend: &mut dyn LlmBackend,
    log: &mut SessionLog,
    gate: &mut dyn ConfirmGate,
) -> Result<RefinementSession, SessionError> {
    config.validate().map_err(|e| SessionError::Input(e.to_string()))?;
    if inputs.traces.is_empty() {
        return Err(SessionError::Input("at least one trace is required".into()));
    }
    let opts = ExtractOptions { module: config.module.clone(), header_only: false, roles: config.roles.clone() };
    let inventory = extract_signals_with(&inputs.rtl, &opts).map_err(|e| SessionError::Input(format!("RTL: {e}")))?;
    let mut parameters = inventory.parameters.clone();
    parameters.extend(config.parameters.clone());
    let traces: Vec<TraceInfo> = inputs
        .traces
        .iter()
        .map(|(n, t)| TraceInfo { name: n.clone(), cycles: t.cycles(), time_span: t.time_span() })
        .collect();
    let references = ReferenceSet::new(&inputs.references);
    let mut s = RefinementSession {
        design: config.design.clone(),
        config: config.clone(),
        inventory,
        parameters,
        system_prompt: None,
        history: Vec::new(),
        assertions: Vec::new(),
        traces: traces.clone(),
        complete: false,
    };
    log.append(LogEvent::SessionStart {
        design: s.design.clone(),
        tool: config.tool.clone(),
        backend: backend.id().to_string(),
        template_version: prompt::TEMPLATE_VERSION,
        max_iterations: config.max_iterations,
        traces,
    })?;

    let seed = build_prompt(Stage::ContextSeed, &s.design, &Payload::Context(inputs.context.clone()), log.now())?;
    log.append(LogEvent::Prompt { stage: seed.stage, iteration: 0, assertion: None, body: seed.body.clone() })?;
    s.system_prompt = Some(seed);

    let p = build_prompt(Stage::Spec, &s.design, &Payload::Spec(inputs.spec.clone()), log.now())?;
    let resp = query_llm(&mut s, p, backend, log)?;
    let mut current = take_parsed(&resp, log)?;

    if let Some(bd) = &inputs.block_diagram {
        let p = build_prompt(Stage::BlockDiagram, &s.design, &Payload::BlockDiagram(bd.clone()), log.now())?;
        let resp = query_llm(&mut s, p, backend, log)?;
        let revised = take_parsed(&resp, log)?;
        if !revised.is_empty() {
            current = revised;
        }
    }

    let source = if config.header_only { s.inventory.render_declarations() } else { inputs.rtl.clone() };
    let payload = Payload::Verilog { source, assertions: print_assertions(&current) };
    let p = build_prompt(Stage::VerilogSync, &s.design, &payload, log.now())?;
    let resp = query_llm(&mut s, p, backend, log)?;
    let synced = take_parsed(&resp, log)?;
    if !synced.is_empty() {
        current = synced;
    }

    for ast in current {
        log.append(LogEvent::Status { assertion: ast.name.clone(), from: None, to: Status::Raw, iterations_used: 0 })?;
        s.assertions.push(AssertionState {
            name: ast.name.clone(),
            ast,
            status: Status::Raw,
            iterations_used: 0,
            last_report: None,
        });
    }

    for i in 0..s.assertions.len() {
        refine(&mut s, i, inputs, &references, backend, log, gate)?;
    }

    s.complete = true;
    log.append(LogEvent::SessionEnd { summary: s.summary() })?;
    Ok(s)
}

fn take_parsed(resp: &LlmResponse, log: &mut SessionLog) -> Result<Vec<AssertionAst>, SessionError> {
    let (asts, errors) = parse_response(resp);
    if !errors.is_empty() {
        log.append(LogEvent::Diagnostics { assertion: None, diagnostics: errors })?;
    }
    Ok(asts)
}

fn refine(
    s: &mut RefinementSession,
    i: usize,
    inputs: &SessionInputs,
    references: &ReferenceSet,
    backend: &mut dyn LlmBackend,
    log: &mut SessionLog,
    gate: &mut dyn ConfirmGate,
) -> Result<(), SessionError> {
    // errors from a repair reply that could not be used
    let mut pending: Vec<Diagnostic> = Vec::new();
    let mut pending_text: Vec<String> = Vec::new();
    loop {
        let (name, ast) = (s.assertions[i].name.clone(), s.assertions[i].ast.clone());
        let mut c = check(&ast, &s.inventory, &s.parameters, &inputs.traces);
        c.errors.splice(0..0, pending.drain(..));
        c.rendered.splice(0..0, pending_text.drain(..));
        let reference = (!references.is_empty()).then_some((references, &ast));
        let class = classify_failure(&c.errors, c.report.as_ref(), reference);
        log.append(LogEvent::Evaluation { assertion: name.clone(), class, report: c.report.clone() })?;
        s.assertions[i].last_report = c.report.clone();

        let passes = c.report.as_ref().map_or(0, |r| r.passes);
        let st = &mut s.assertions[i];
        if class == FailureClass::Clean && passes > 0 {
            return transition(log, st, Status::Passing);
        }
        if st.status == Status::Raw {
            transition(log, st, Status::Failing)?;
        }
        if class == FailureClass::SuspectedDesignBug {
            return transition(log, st, Status::SuspectedDesignBug);
        }
        if st.iterations_used >= s.config.max_iterations {
            return transition(log, st, Status::Abandoned);
        }
        st.iterations_used += 1;
        let iteration = st.iterations_used;
        transition(log, st, Status::Failing)?;

        let failure = match &c.report {
            Some(r) if r.fails > 0 => r.first_failure_message.clone(),
            Some(r) if c.rendered.is_empty() => Some(vacuity_message(&name, r)),
            _ => None,
        };
        let fb = Feedback { assertion: name.clone(), text: pretty_print(&ast), diagnostics: c.rendered, failure, iteration };
        let mut p = build_prompt(Stage::ErrorFeedback, &s.design, &Payload::Feedback(fb), log.now())?;
        if s.config.interactive_confirm {
            match gate.review(&p) {
                Review::Send => {}
                Review::Replace(body) => p.body = body,
                Review::Stop => return Err(SessionError::Stopped),
            }
        }
        let resp = query_llm(s, p, backend, log)?;
        let (asts, errors) = parse_response(&resp);
        match asts.into_iter().find(|a| a.name == name) {
            Some(new) => s.assertions[i].ast = new,
            None => {
                let d = Diagnostic::error(
                    DiagCode::MissingRepair,
                    format!("the reply does not contain a usable assertion named `{name}`"),
                    Span::new(0, 1),
                );
                pending_text.extend(errors);
                pending_text.push(d.render(None));
                pending.push(d);
            }
        }
    }
}

fn read(path: &std::path::Path) -> Result<String, SessionError> {
    std::fs::read_to_string(path).map_err(|e| SessionError::Input(format!("{}: {e}", path.display())))
}

fn file_name(path: &std::path::Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Reads every file named by a config. Traces are sampled on
/// `config.clock`, or on the RTL's clock-role signal when unset.
pub fn load_inputs(config: &SessionConfig) -> Result<SessionInputs, SessionError> {
    let need = |p: &Option<std::path::PathBuf>, what: &str| {
        p.clone().ok_or_else(|| SessionError::Input(format!("config names no {what} file")))
    };
    let spec = read(&need(&config.spec, "spec")?)?;
    let rtl = read(&need(&config.rtl, "rtl")?)?;
    let block_diagram = config.block_diagram.as_deref().map(read).transpose()?;
    let context = config.context.iter().map(|p| Ok((file_name(p), read(p)?))).collect::<Result<_, SessionError>>()?;
    let clock = match &config.clock {
        Some(c) => c.clone(),
        None => {
            let opts = ExtractOptions { module: config.module.clone(), header_only: true, roles: config.roles.clone() };
            let inv = extract_signals_with(&rtl, &opts).map_err(|e| SessionError::Input(format!("RTL: {e}")))?;
            inv.signals
                .iter()
                .find(|s| s.role_hint == crate::verilog::RoleHint::Clock)
                .map(|s| s.name.clone())
                .ok_or_else(|| SessionError::Input("no clock given and none found in the RTL".into()))?
        }
    };
    let mut traces = Vec::new();
    for p in &config.traces {
        let t = crate::trace::vcd::ingest_vcd(&read(p)?, &clock)
            .map_err(|e| SessionError::Input(format!("{}: {e}", p.display())))?;
        traces.push((file_name(p), t));
    }
    let references = match &config.references {
        Some(p) => crate::sva::load_assertions(&read(p)?, "reference", &config.design)
            .map_err(|d| SessionError::Input(format!("{}: {}", p.display(), d[0])))?
            .0
            .assertions,
        None => Vec::new(),
    };
    Ok(SessionInputs { spec, block_diagram, rtl, context, traces, references })
}

/// Replays an interrupted session: replies already in `existing` are served
/// again instead of being requested, and only new records are appended.
pub fn resume_session<B: LlmBackend>(
    inputs: &SessionInputs,
    config: &SessionConfig,
    inner: B,
    existing: &[LogRecord],
    log: &mut SessionLog,
    gate: &mut dyn ConfirmGate,
) -> Result<RefinementSession, SessionError> {
    let mut b = backend::ResumingBackend::new(log::recorded_responses(existing), inner);
    run_session(inputs, config, &mut b, log, gate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{simulate_timer, TimerStimulus};
    use backend::ScriptedBackend;

    const RTL: &str = "module m(input clk, input rst_n, input a, output logic b); endmodule";

    fn inputs() -> SessionInputs {
        let mut t = Trace::with_cycles("clk", 4);
        t.insert_known("rst_n", 1, &[1, 1, 1, 1]);
        t.insert_known("a", 1, &[1, 0, 1, 1]);
        t.insert_known("b", 1, &[1, 0, 1, 1]);
        SessionInputs {
            spec: "b follows a".into(),
            block_diagram: None,
            rtl: RTL.into(),
            context: vec![],
            traces: vec![("t".into(), t)],
            references: vec![],
        }
    }

    fn fenced(body: &str) -> String {
        format!("Sure.\n```systemverilog\n{body}\n```\n")
    }

    const GOOD: &str = "property p; @(posedge clk) disable iff (!rst_n) a |-> b; endproperty assert property (p);";
    const LATE: &str = "property p; @(posedge clk) disable iff (!rst_n) a |=> b; endproperty assert property (p);";

    fn run(replies: Vec<String>, cfg: &SessionConfig) -> (Result<RefinementSession, SessionError>, SessionLog, ScriptedBackend) {
        let mut b = ScriptedBackend::new(replies);
        let mut log = SessionLog::in_memory().with_clock(|| 0);
        let r = run_session(&inputs(), cfg, &mut b, &mut log, &mut AutoApprove);
        (r, log, b)
    }

    #[test]
    fn passes_raw() {
        let (s, _, b) = run(vec![fenced(GOOD), fenced(GOOD)], &SessionConfig::default());
        let s = s.unwrap();
        assert_eq!(s.assertions[0].status, Status::Passing);
        assert_eq!(s.assertions[0].iterations_used, 0);
        assert_eq!(s.history.len(), 2);
        // the system message is the context seed
        assert_eq!(b.seen[1][0].role, Role::System);
        assert_eq!(b.seen[1].len(), 4);
    }

    #[test]
    fn repairs_after_failure() {
        let (s, log, b) = run(vec![fenced(LATE), fenced(LATE), fenced(GOOD)], &SessionConfig::default());
        let s = s.unwrap();
        assert_eq!((s.assertions[0].status, s.assertions[0].iterations_used), (Status::Passing, 1));
        let fb = &b.seen[2].last().unwrap().content;
        assert!(fb.contains("failed at cycle"), "{fb}");
        assert!(log.records().iter().any(|r| matches!(r.event, LogEvent::SessionEnd { .. })));
    }

    #[test]
    fn missing_repair_is_fed_back_and_cap_abandons() {
        let cfg = SessionConfig { max_iterations: 2, ..SessionConfig::default() };
        let (s, _, b) = run(vec![fenced(LATE), fenced(LATE), "I am not sure.".into(), fenced(LATE)], &cfg);
        let s = s.unwrap();
        assert_eq!((s.assertions[0].status, s.assertions[0].iterations_used), (Status::Abandoned, 2));
        let second = &b.seen[3].last().unwrap().content;
        assert!(second.contains("MissingRepair"), "{second}");
    }

    #[test]
    fn unknown_signal_feedback_quotes_diagnostic() {
        let bad = "property p; @(posedge clk) disable iff (!rst_n) a |-> b_q; endproperty assert property (p);";
        let (s, _, b) = run(vec![fenced(bad), fenced(bad), fenced(GOOD)], &SessionConfig::default());
        assert_eq!(s.unwrap().assertions[0].iterations_used, 1);
        let (asts, _) = parse_assertions(bad);
        let inv = crate::verilog::extract_signals(RTL).unwrap();
        let d = check_semantics(&asts[0], &inv);
        let text = pretty_print(&asts[0]);
        let rendered = d.iter().find(|d| d.code == DiagCode::UnknownSignal).unwrap().render(Some(&text));
        assert!(b.seen[2].last().unwrap().content.contains(&rendered));
    }

    #[test]
    fn vacuous_only_is_not_passing() {
        let never = "property p; @(posedge clk) disable iff (!rst_n) (a && !a) |-> b; endproperty assert property (p);";
        let cfg = SessionConfig { max_iterations: 1, ..SessionConfig::default() };
        let (s, _, b) = run(vec![fenced(never), fenced(never), fenced(never)], &cfg);
        assert_eq!(s.unwrap().assertions[0].status, Status::Abandoned);
        assert!(b.seen[2].last().unwrap().content.contains("never passed a non-vacuous attempt"));
    }

    #[test]
    fn design_bug_halts_without_repair() {
        let mut inp = inputs();
        let (refs, _) = parse_assertions(LATE);
        inp.references = refs;
        let mut b = ScriptedBackend::new(vec![fenced(LATE), fenced(LATE)]);
        let mut log = SessionLog::in_memory();
        let s = run_session(&inp, &SessionConfig::default(), &mut b, &mut log, &mut AutoApprove).unwrap();
        assert_eq!((s.assertions[0].status, s.assertions[0].iterations_used), (Status::SuspectedDesignBug, 0));
        assert_eq!(s.history.len(), 2);
    }

    #[test]
    fn backend_error_keeps_log() {
        let (s, log, _) = run(vec![fenced(LATE), fenced(LATE)], &SessionConfig::default());
        assert!(matches!(s, Err(SessionError::Backend(BackendError::FixturesExhausted { .. }))));
        assert!(log.records().len() >= 5);
    }

    #[test]
    fn gate_can_edit_or_stop() {
        let cfg = SessionConfig { interactive_confirm: true, ..SessionConfig::default() };
        let mut b = ScriptedBackend::new(vec![fenced(LATE), fenced(LATE), fenced(GOOD)]);
        let mut gate = TerminalGate::new("e\nplease fix\n.\n".as_bytes(), Vec::new());
        let s = run_session(&inputs(), &cfg, &mut b, &mut SessionLog::in_memory(), &mut gate).unwrap();
        assert_eq!(s.history[2].0.body, "please fix\n");
        let mut b = ScriptedBackend::new(vec![fenced(LATE), fenced(LATE)]);
        let mut gate = TerminalGate::new("q\n".as_bytes(), Vec::new());
        let r = run_session(&inputs(), &cfg, &mut b, &mut SessionLog::in_memory(), &mut gate);
        assert!(matches!(r, Err(SessionError::Stopped)));
    }

    #[test]
    fn status_transitions() {
        use Status::*;
        assert!(Raw.can_move_to(Passing) && Failing.can_move_to(Abandoned));
        assert!(!Passing.can_move_to(Failing) && !Raw.can_move_to(Abandoned) && !Abandoned.can_move_to(Passing));
    }

    #[test]
    fn generate_assertion_checks_every_instance() {
        let rtl = "module rv_timer #(parameter int N = 2)(input clk_i, input rst_ni, input active, \
                   input [63:0] mtime, input [63:0] mtimecmp [N], output [N-1:0] intr); endmodule";
        let trace = simulate_timer(&TimerStimulus::steady(10, 1, 0, 1, [2, 4]));
        let (asts, _) = parse_assertions(
            "generate for (genvar t = 0; t < N; t++) begin : g\nproperty q;\n@(posedge clk_i) disable iff (!rst_ni) \
             (active && mtime >= mtimecmp[t]) |-> intr[t];\nendproperty\nassert property (q);\nend\nendgenerate",
        );
        let inv = crate::verilog::extract_signals(rtl).unwrap();
        let c = check(&asts[0], &inv, &inv.parameters, &[("t".into(), trace.clone())]);
        let r = c.report.unwrap();
        assert_eq!(r.attempts, 2 * trace.cycles());
        assert_eq!(r.fails, 0);
        assert!(r.passes > 0);
    }
}
