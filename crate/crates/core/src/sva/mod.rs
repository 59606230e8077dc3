// SPDX-License-Identifier: Apache-2.0

//! The assertion subset: AST, tolerant parser, printer, normalizer and
//! inventory checks.

pub mod ast;
pub mod diag;
mod lexer;
pub mod normalize;
pub mod parser;
pub mod printer;
pub mod semantics;

use serde::{Deserialize, Serialize};

pub use ast::*;
pub use diag::{has_errors, DiagCode, Diagnostic, Severity, Span};
pub use normalize::normalize;
pub use parser::parse_assertions;
pub use printer::{pretty_print, print_assertions, print_bool};
pub use semantics::{check_semantics, expand_all, expand_generate, ExpandError};

pub const SCHEMA_VERSION: u32 = 1;

/// JSON container for a named set of assertions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssertionSet {
    pub schema: u32,
    /// Which tool or author produced the set, e.g. "generated", "baseline".
    pub tool: String,
    pub design: String,
    pub assertions: Vec<AssertionAst>,
}

impl AssertionSet {
    pub fn new(tool: &str, design: &str, assertions: Vec<AssertionAst>) -> Self {
        AssertionSet { schema: SCHEMA_VERSION, tool: tool.into(), design: design.into(), assertions }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("assertion set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let set: AssertionSet = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if set.schema != SCHEMA_VERSION {
            return Err(format!("unsupported assertion-set schema {}", set.schema));
        }
        Ok(set)
    }
}

/// Reads an assertion set from either JSON or SVA text. SVA input must
/// parse without error diagnostics.
pub fn load_assertions(text: &str, tool: &str, design: &str) -> Result<(AssertionSet, Vec<Diagnostic>), Vec<Diagnostic>> {
    if text.trim_start().starts_with('{') {
        return AssertionSet::from_json(text)
            .map(|s| (s, vec![]))
            .map_err(|m| vec![Diagnostic::error(DiagCode::UnexpectedToken, m, Span::new(0, 1))]);
    }
    let (asts, diags) = parse_assertions(text);
    if has_errors(&diags) {
        return Err(diags);
    }
    Ok((AssertionSet::new(tool, design, asts), diags))
}
