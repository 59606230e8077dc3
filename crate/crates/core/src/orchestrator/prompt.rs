// SPDX-License-Identifier: Apache-2.0

//! Prompt templates, one per stage.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bumped whenever template wording changes.
pub const TEMPLATE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    ContextSeed,
    Spec,
    BlockDiagram,
    VerilogSync,
    ErrorFeedback,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::ContextSeed => "context_seed",
            Stage::Spec => "spec",
            Stage::BlockDiagram => "block_diagram",
            Stage::VerilogSync => "verilog_sync",
            Stage::ErrorFeedback => "error_feedback",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub stage: Stage,
    pub body: String,
    pub iteration: u32,
    /// Assertion under repair, for error feedback.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assertion: Option<String>,
    pub timestamp_ms: u64,
}

/// Stage-specific prompt input.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// (file name, contents) of each reference document.
    Context(Vec<(String, String)>),
    Spec(String),
    BlockDiagram(String),
    Verilog { source: String, assertions: String },
    Feedback(Feedback),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feedback {
    pub assertion: String,
    /// Current text of the assertion.
    pub text: String,
    /// Rendered diagnostics, quoted as-is.
    pub diagnostics: Vec<String>,
    pub failure: Option<String>,
    pub iteration: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("payload does not fit the {stage} stage: {reason}")]
    PayloadMismatch { stage: &'static str, reason: String },
}

fn mismatch(stage: Stage, reason: &str) -> PromptError {
    PromptError::PayloadMismatch { stage: stage.as_str(), reason: reason.to_string() }
}

fn nonempty(stage: Stage, what: &str, text: &str) -> Result<(), PromptError> {
    if text.trim().is_empty() {
        Err(mismatch(stage, &format!("{what} is empty")))
    } else {
        Ok(())
    }
}

/// Instantiates the template for `stage`. `design` names the design under
/// test; `timestamp_ms` is stored as given.
pub fn build_prompt(stage: Stage, design: &str, payload: &Payload, timestamp_ms: u64) -> Result<PromptRecord, PromptError> {
    let mut body = String::new();
    let mut iteration = 0;
    let mut assertion = None;
    match (stage, payload) {
        (Stage::ContextSeed, Payload::Context(docs)) => {
            body.push_str(
                "You are a verification engineer who writes SystemVerilog assertions (SVA) for RTL designs.\n\
                 Use only the assertion forms shown in the reference material below. Give every property a \
                 name, a clocking event and, where the design has a reset, a `disable iff` guard. Put all \
                 assertions in one fenced ```systemverilog block and describe each one in a comment line \
                 above it.\n",
            );
            for (name, text) in docs {
                write!(body, "\n--- reference: {name} ---\n{}\n", text.trim_end()).unwrap();
            }
        }
        (Stage::Spec, Payload::Spec(spec)) => {
            nonempty(stage, "specification", spec)?;
            write!(
                body,
                "Design `{design}`. Here is its specification in natural language:\n\n{}\n\n\
                 Write SVA assertions that check the behaviour described above.\n",
                spec.trim_end()
            )
            .unwrap();
        }
        (Stage::BlockDiagram, Payload::BlockDiagram(text)) => {
            nonempty(stage, "block diagram description", text)?;
            write!(
                body,
                "Here is a description of the block diagram of `{design}`:\n\n{}\n\n\
                 Revise the assertions if the structure above changes any of them, and output the full set again.\n",
                text.trim_end()
            )
            .unwrap();
        }
        (Stage::VerilogSync, Payload::Verilog { source, assertions }) => {
            nonempty(stage, "Verilog source", source)?;
            write!(
                body,
                "Here is the RTL implementation of `{design}`:\n\n```verilog\n{}\n```\n\n\
                 Rewrite the assertions below so that every signal, parameter and clock name is exactly \
                 the one used in this RTL. Keep the behaviour of each assertion and keep its property name. \
                 Output the full set again.\n\n```systemverilog\n{}\n```\n",
                source.trim_end(),
                assertions.trim_end()
            )
            .unwrap();
        }
        (Stage::ErrorFeedback, Payload::Feedback(fb)) => {
            if fb.iteration == 0 {
                return Err(mismatch(stage, "feedback iterations start at 1"));
            }
            if fb.diagnostics.is_empty() && fb.failure.is_none() {
                return Err(mismatch(stage, "no diagnostic or failure message to report"));
            }
            iteration = fb.iteration;
            assertion = Some(fb.assertion.clone());
            write!(body, "The assertion `{}` was checked against the design and did not pass.\n\n", fb.assertion).unwrap();
            write!(body, "```systemverilog\n{}\n```\n\nChecker log:\n", fb.text.trim_end()).unwrap();
            for d in &fb.diagnostics {
                writeln!(body, "{d}").unwrap();
            }
            if let Some(f) = &fb.failure {
                writeln!(body, "{f}").unwrap();
            }
            write!(
                body,
                "\nAnalyze the log, find the cause and rectify the assertion. Regenerate only `{}`, \
                 keeping its name, in one fenced ```systemverilog block.\n",
                fb.assertion
            )
            .unwrap();
        }
        _ => return Err(mismatch(stage, "wrong payload kind")),
    }
    Ok(PromptRecord { stage, body, iteration, assertion, timestamp_ms })
}
