// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::sva::{normalize, AssertionAst, DiagCode, Diagnostic};
use crate::trace::EvalReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureClass {
    Syntax,
    UnknownSignal,
    SemanticFail,
    SuspectedDesignBug,
    Clean,
}

fn is_signal_code(code: DiagCode) -> bool {
    matches!(code, DiagCode::UnknownSignal | DiagCode::SignalMissingFromTrace | DiagCode::ClockMismatch)
}

/// Assertions known to hold on the design. A failing assertion whose
/// normalized property equals one of these points at the design instead of
/// the assertion.
#[derive(Debug, Clone, Default)]
pub struct ReferenceSet {
    expected_pass: Vec<AssertionAst>,
}

impl ReferenceSet {
    pub fn new(expected_pass: &[AssertionAst]) -> Self {
        ReferenceSet { expected_pass: expected_pass.iter().map(normalize).collect() }
    }

    pub fn marks_expected_pass(&self, ast: &AssertionAst) -> bool {
        let n = normalize(ast);
        self.expected_pass.iter().any(|r| r.same_property(&n))
    }

    pub fn len(&self) -> usize {
        self.expected_pass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expected_pass.is_empty()
    }
}

/// Decides what kind of feedback an assertion needs.
///
/// Errors other than missing signals count as syntax problems and take
/// precedence, then missing signals, then failing attempts.
pub fn classify_failure(
    diags: &[Diagnostic],
    report: Option<&EvalReport>,
    reference: Option<(&ReferenceSet, &AssertionAst)>,
) -> FailureClass {
    let errors = diags.iter().filter(|d| d.is_error());
    let mut signal = false;
    for d in errors {
        if !is_signal_code(d.code) {
            return FailureClass::Syntax;
        }
        signal = true;
    }
    if signal {
        return FailureClass::UnknownSignal;
    }
    match report {
        Some(r) if r.fails > 0 => match reference {
            Some((refs, ast)) if refs.marks_expected_pass(ast) => FailureClass::SuspectedDesignBug,
            _ => FailureClass::SemanticFail,
        },
        _ => FailureClass::Clean,
    }
}
