// SPDX-License-Identifier: Apache-2.0

//! Error-tolerant parser for the assertion subset.
//!
//! Model output is often slightly off: parenthesized property names,
//! `end property`, unbalanced parentheses around the clocking event,
//! `else $fatal(...)` action blocks, missing `endproperty`. These are
//! accepted with a `ToleratedVariant` warning. Anything else produces an
//! error diagnostic; the parser then resynchronizes at the next
//! `property`/`assert`/`generate` keyword and keeps going.

use std::collections::HashSet;

use super::ast::*;
use super::diag::{DiagCode, Diagnostic, Span};
use super::lexer::{lex, TokKind, Token};

/// Parses every `property ... endproperty` + `assert property` pair in
/// `source`. Never fails: problems are reported as diagnostics.
pub fn parse_assertions(source: &str) -> (Vec<AssertionAst>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let toks = lex(source, &mut diags);
    let mut p = Parser {
        toks,
        pos: 0,
        src_len: source.len(),
        diags,
        pending: Vec::new(),
        failed: HashSet::new(),
        out: Vec::new(),
        out_seq: Vec::new(),
        next_seq: 0,
        spec_semicolon: false,
        inline_count: 0,
        in_generate: false,
    };
    p.items(None, &[]);
    p.finish();
    (p.out, p.diags)
}

struct PendingProperty {
    name: String,
    parts: PropertyParts,
    span: Span,
    asserted: bool,
    seq: usize,
    binding: Option<GenerateBinding>,
}

struct PropertyParts {
    clock: String,
    disable: Option<BoolExpr>,
    body: PropertyExpr,
}

#[derive(Debug)]
struct Abort;

type PResult<T> = Result<T, Abort>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    src_len: usize,
    diags: Vec<Diagnostic>,
    pending: Vec<PendingProperty>,
    /// Properties that failed to parse; asserts naming them stay silent.
    failed: HashSet<String>,
    out: Vec<AssertionAst>,
    in_generate: bool,
    /// Declaration order of each entry in `out`.
    out_seq: Vec<usize>,
    next_seq: usize,
    /// Whether the last `property_spec` consumed its terminating `;`.
    spec_semicolon: bool,
    inline_count: usize,
}

const SYNC_KEYWORDS: &[&str] = &["property", "assert", "generate", "endgenerate", "for", "genvar", "end"];

impl Parser {
    // ----- token helpers -------------------------------------------------

    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, n: usize) -> Option<&TokKind> {
        self.toks.get(self.pos + n).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => match self.toks.last() {
                Some(t) => t.span,
                None => Span::new(0, self.src_len.max(1)),
            },
        }
    }

    fn prev_span(&self) -> Span {
        self.toks.get(self.pos.saturating_sub(1)).map_or_else(|| self.span(), |t| t.span)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(TokKind::Ident(s)) if s == kw)
    }

    fn is_kw_at(&self, n: usize, kw: &str) -> bool {
        matches!(self.peek_at(n), Some(TokKind::Ident(s)) if s == kw)
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(TokKind::Punct(s)) if *s == p)
    }

    fn is_punct_at(&self, n: usize, p: &str) -> bool {
        matches!(self.peek_at(n), Some(TokKind::Punct(s)) if *s == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_eof(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(TokKind::Ident(s)) | Some(TokKind::System(s)) => format!("`{s}`"),
            Some(TokKind::Int(v)) => format!("`{v}`"),
            Some(TokKind::UnknownInt) => "x/z literal".into(),
            Some(TokKind::Str(_)) => "string literal".into(),
            Some(TokKind::Label(l)) => format!("`'{l}'`"),
            Some(TokKind::Punct(p)) => format!("`{p}`"),
        }
    }

    fn error<T>(&mut self, code: DiagCode, message: impl Into<String>) -> PResult<T> {
        let span = self.span();
        let code = if self.at_eof() && code == DiagCode::UnexpectedToken { DiagCode::UnexpectedEof } else { code };
        self.diags.push(Diagnostic::error(code, message, span));
        Err(Abort)
    }

    fn error_at<T>(&mut self, code: DiagCode, message: impl Into<String>, span: Span) -> PResult<T> {
        self.diags.push(Diagnostic::error(code, message, span));
        Err(Abort)
    }

    fn warn(&mut self, code: DiagCode, message: impl Into<String>, span: Span) {
        self.diags.push(Diagnostic::warning(code, message, span));
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            let msg = format!("expected `{p}`, found {}", self.describe());
            self.error(DiagCode::UnexpectedToken, msg)
        }
    }

    fn expect_ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(TokKind::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => {
                let msg = format!("expected identifier, found {}", self.describe());
                self.error(DiagCode::UnexpectedToken, msg)
            }
        }
    }

    fn expect_int(&mut self) -> PResult<i64> {
        match self.peek() {
            Some(TokKind::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => {
                let msg = format!("expected integer, found {}", self.describe());
                self.error(DiagCode::UnexpectedToken, msg)
            }
        }
    }

    /// Skips to the next token that can start (or end) a top-level item.
    fn recover(&mut self) {
        if !self.at_eof() {
            self.pos += 1;
        }
        while let Some(t) = self.peek() {
            match t {
                TokKind::Ident(s) if SYNC_KEYWORDS.contains(&s.as_str()) => return,
                TokKind::Ident(s) if s == "endproperty" => {
                    self.pos += 1;
                    return;
                }
                TokKind::Ident(_) if self.is_punct_at(1, ":") && self.is_kw_at(2, "assert") => return,
                _ => self.pos += 1,
            }
        }
    }

    // ----- items ---------------------------------------------------------

    /// Parses items until one of `terminators` (not consumed) or EOF.
    fn items(&mut self, binding: Option<&GenerateBinding>, terminators: &[&str]) {
        while let Some(tok) = self.peek().cloned() {
            if let TokKind::Ident(kw) = &tok {
                if terminators.contains(&kw.as_str()) {
                    return;
                }
            }
            let r = match &tok {
                TokKind::Ident(kw) => match kw.as_str() {
                    "property" => self.property_decl(binding),
                    "assert" => self.assert_directive(None, binding),
                    "generate" => self.generate(binding),
                    "for" => {
                        let span = self.span();
                        if binding.is_none() && !self.in_generate {
                            self.warn(
                                DiagCode::ToleratedVariant,
                                "`for` loop outside `generate`; treated as a generate loop",
                                span,
                            );
                        }
                        self.for_loop(binding)
                    }
                    "genvar" => self.genvar_decl(),
                    "sequence" => {
                        let span = self.span();
                        self.skip_until_kw("endsequence");
                        self.error_at(DiagCode::UnsupportedConstruct, "named sequences are not supported", span)
                    }
                    "cover" | "assume" | "restrict" => {
                        let msg = format!("`{kw} property` is not supported");
                        self.error(DiagCode::UnsupportedConstruct, msg)
                    }
                    _ if self.is_punct_at(1, ":") && self.is_kw_at(2, "assert") => {
                        let label = kw.clone();
                        self.pos += 2;
                        self.assert_directive(Some(label), binding)
                    }
                    _ => {
                        let msg = format!("unexpected {}", self.describe());
                        self.error(DiagCode::UnexpectedToken, msg)
                    }
                },
                TokKind::Punct(";") => {
                    self.pos += 1;
                    Ok(())
                }
                _ => {
                    let msg = format!("unexpected {}", self.describe());
                    self.error(DiagCode::UnexpectedToken, msg)
                }
            };
            if r.is_err() {
                self.recover();
            }
        }
    }

    fn skip_until_kw(&mut self, kw: &str) {
        while !self.at_eof() {
            if self.eat_kw(kw) {
                return;
            }
            self.pos += 1;
        }
    }

    fn genvar_decl(&mut self) -> PResult<()> {
        self.pos += 1;
        self.expect_ident()?;
        while self.eat_punct(",") {
            self.expect_ident()?;
        }
        self.expect_punct(";")
    }

    fn generate(&mut self, outer: Option<&GenerateBinding>) -> PResult<()> {
        let start = self.span();
        self.pos += 1;
        if outer.is_some() {
            return self.error_at(DiagCode::UnsupportedConstruct, "nested generate blocks are not supported", start);
        }
        self.in_generate = true;
        self.items(None, &["endgenerate"]);
        self.in_generate = false;
        if !self.eat_kw("endgenerate") {
            return self.error(DiagCode::UnexpectedEof, "`generate` without `endgenerate`");
        }
        Ok(())
    }

    fn for_loop(&mut self, outer: Option<&GenerateBinding>) -> PResult<()> {
        let start = self.span();
        self.pos += 1;
        if outer.is_some() {
            return self.error_at(DiagCode::UnsupportedConstruct, "nested generate loops are not supported", start);
        }
        self.expect_punct("(")?;
        self.eat_kw("genvar");
        let var = self.expect_ident()?;
        self.expect_punct("=")?;
        let lower = self.expect_int()?;
        self.expect_punct(";")?;
        let v2 = self.expect_ident()?;
        if v2 != var {
            let span = self.prev_span();
            return self.error_at(DiagCode::UnsupportedConstruct, format!("loop condition must test `{var}`"), span);
        }
        let inclusive = if self.eat_punct("<") {
            false
        } else if self.eat_punct("<=") {
            true
        } else {
            let msg = format!("expected `<` in loop condition, found {}", self.describe());
            return self.error(DiagCode::UnsupportedConstruct, msg);
        };
        let upper = match self.peek().cloned() {
            Some(TokKind::Int(v)) => {
                self.pos += 1;
                LoopBound::Lit(if inclusive { v + 1 } else { v })
            }
            Some(TokKind::Ident(p)) if !inclusive => {
                self.pos += 1;
                LoopBound::Param(p)
            }
            _ => {
                let msg = format!("unsupported loop bound {}", self.describe());
                return self.error(DiagCode::UnsupportedConstruct, msg);
            }
        };
        self.expect_punct(";")?;
        self.loop_step(&var)?;
        self.expect_punct(")")?;
        let binding = GenerateBinding { loop_var: var, lower, upper };
        if self.eat_kw("begin") {
            if self.eat_punct(":") {
                self.expect_ident()?;
            }
            self.items(Some(&binding), &["end", "endgenerate"]);
            if !self.eat_kw("end") {
                return self.error(DiagCode::UnexpectedToken, "expected `end` closing the generate loop");
            }
            if self.eat_punct(":") {
                self.expect_ident()?;
            }
            Ok(())
        } else {
            // single-item body
            match self.peek() {
                Some(TokKind::Ident(k)) if k == "property" => {
                    self.property_decl(Some(&binding))?;
                    if self.is_kw("assert") {
                        self.assert_directive(None, Some(&binding))?;
                    }
                    Ok(())
                }
                Some(TokKind::Ident(k)) if k == "assert" => self.assert_directive(None, Some(&binding)),
                _ => {
                    let msg = format!("expected `begin` after loop header, found {}", self.describe());
                    self.error(DiagCode::UnexpectedToken, msg)
                }
            }
        }
    }

    fn loop_step(&mut self, var: &str) -> PResult<()> {
        // t++ | ++t | t += 1 | t = t + 1
        if self.eat_punct("++") {
            let v = self.expect_ident()?;
            return self.check_step_var(var, &v);
        }
        let v = self.expect_ident()?;
        self.check_step_var(var, &v)?;
        if self.eat_punct("++") {
            return Ok(());
        }
        if self.eat_punct("+=") {
            return self.expect_step_one();
        }
        if self.eat_punct("=") {
            let v = self.expect_ident()?;
            self.check_step_var(var, &v)?;
            self.expect_punct("+")?;
            return self.expect_step_one();
        }
        let msg = format!("unsupported loop step {}", self.describe());
        self.error(DiagCode::UnsupportedConstruct, msg)
    }

    fn check_step_var(&mut self, var: &str, got: &str) -> PResult<()> {
        if var == got {
            Ok(())
        } else {
            let span = self.prev_span();
            self.error_at(DiagCode::UnsupportedConstruct, format!("loop step must update `{var}`"), span)
        }
    }

    fn expect_step_one(&mut self) -> PResult<()> {
        let span = self.span();
        if self.expect_int()? == 1 {
            Ok(())
        } else {
            self.error_at(DiagCode::UnsupportedConstruct, "only unit loop steps are supported", span)
        }
    }

    // ----- property declaration -------------------------------------------

    fn property_decl(&mut self, binding: Option<&GenerateBinding>) -> PResult<()> {
        let start = self.span();
        self.pos += 1; // property
        let name = if self.is_punct("(") && matches!(self.peek_at(1), Some(TokKind::Ident(_))) && self.is_punct_at(2, ")") {
            let span = self.span();
            self.pos += 1;
            let n = self.expect_ident()?;
            self.pos += 1;
            self.warn(DiagCode::ToleratedVariant, format!("parenthesized property name `({n})`"), span.to(self.prev_span()));
            n
        } else {
            self.expect_ident()?
        };
        if self.is_punct("(") {
            self.failed.insert(name.clone());
            return self.error(DiagCode::UnsupportedConstruct, "property arguments are not supported");
        }
        if !self.eat_punct(";") {
            let span = self.span();
            self.warn(DiagCode::ToleratedVariant, "missing `;` after property name", span);
        }
        let parts = match self.property_spec() {
            Ok(p) => p,
            Err(Abort) => {
                self.failed.insert(name);
                return Err(Abort);
            }
        };
        // end of declaration
        if self.eat_kw("endproperty") {
            if self.eat_punct(":") {
                self.expect_ident()?;
            }
        } else if self.is_kw("end") && self.is_kw_at(1, "property") {
            let span = self.span();
            self.pos += 2;
            self.warn(DiagCode::ToleratedVariant, "`end property` written with a space", span.to(self.prev_span()));
        } else if self.at_eof() || self.is_kw("assert") || self.is_kw("property") || self.is_kw("end") || self.is_kw("endgenerate") {
            let span = self.prev_span();
            self.warn(DiagCode::ToleratedVariant, format!("property `{name}` is missing `endproperty`"), span);
        } else {
            self.failed.insert(name);
            let msg = format!("expected `endproperty`, found {}", self.describe());
            return self.error(DiagCode::UnexpectedToken, msg);
        }
        let span = start.to(self.prev_span());
        if self.pending.iter().any(|p| p.name == name && !p.asserted) || self.out.iter().any(|a| a.name == name) {
            return self.error_at(DiagCode::DuplicateAssertion, format!("property `{name}` declared twice"), span);
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.pending.push(PendingProperty { name, parts, span, asserted: false, seq, binding: binding.cloned() });
        Ok(())
    }

    /// `[(]* @(posedge clk) [disable iff (expr)] property_expr [)]* [else action] [;]`
    fn property_spec(&mut self) -> PResult<PropertyParts> {
        let mut wraps = 0;
        let wrap_span = self.span();
        while self.is_punct("(") && (self.is_punct_at(1, "@") || (self.is_punct_at(1, "(") && self.wrap_run_reaches_at())) {
            self.pos += 1;
            wraps += 1;
        }
        if wraps > 0 {
            self.warn(DiagCode::ToleratedVariant, "property body wrapped in parentheses", wrap_span);
        }
        let clock = self.clocking_event()?;
        let disable = if self.is_kw("disable") {
            self.pos += 1;
            if !self.eat_kw("iff") {
                let msg = format!("expected `iff` after `disable`, found {}", self.describe());
                return self.error(DiagCode::UnexpectedToken, msg);
            }
            self.expect_punct("(")?;
            let e = self.bool_expr()?;
            self.expect_punct(")")?;
            Some(e)
        } else {
            None
        };
        let body = self.property_expr()?;
        for _ in 0..wraps {
            if !self.eat_punct(")") {
                let span = self.prev_span();
                self.warn(DiagCode::ToleratedVariant, "missing `)` closing the property body", span);
                break;
            }
        }
        while self.is_punct(")") {
            let span = self.span();
            self.pos += 1;
            self.warn(DiagCode::ToleratedVariant, "unbalanced `)` after property body", span);
        }
        if self.is_kw("else") {
            self.action_block()?;
        }
        self.spec_semicolon = self.eat_punct(";");
        if !self.spec_semicolon {
            if self.at_eof() || self.is_kw("endproperty") || self.is_kw("end") || self.is_kw("assert") || self.is_kw("property") {
                let span = self.prev_span();
                self.warn(DiagCode::ToleratedVariant, "missing `;` after property body", span);
            } else {
                let msg = format!("expected `;` after property body, found {}", self.describe());
                return self.error(DiagCode::UnexpectedToken, msg);
            }
        }
        // `... ); else $fatal(...);` with the action after the semicolon
        if self.is_kw("else") {
            self.action_block()?;
            self.eat_punct(";");
        }
        Ok(PropertyParts { clock, disable, body })
    }

    /// Whether a run of `(` starting at the cursor is followed by `@`.
    fn wrap_run_reaches_at(&self) -> bool {
        let mut n = 0;
        while self.is_punct_at(n, "(") {
            n += 1;
        }
        self.is_punct_at(n, "@")
    }

    fn clocking_event(&mut self) -> PResult<String> {
        if !self.eat_punct("@") {
            let msg = format!("expected clocking event `@(posedge ...)`, found {}", self.describe());
            return self.error(DiagCode::UnexpectedToken, msg);
        }
        self.expect_punct("(")?;
        if self.is_kw("negedge") || self.is_kw("edge") {
            return self.error(DiagCode::UnsupportedConstruct, "only `posedge` clocking is supported");
        }
        if !self.eat_kw("posedge") {
            let msg = format!("expected `posedge`, found {}", self.describe());
            return self.error(DiagCode::UnsupportedConstruct, msg);
        }
        let clk = self.expect_ident()?;
        if self.is_kw("or") || self.is_punct(",") || self.is_kw("iff") {
            return self.error(DiagCode::UnsupportedConstruct, "multi-signal clocking events are not supported");
        }
        self.expect_punct(")")?;
        Ok(clk)
    }

    fn action_block(&mut self) -> PResult<()> {
        let start = self.span();
        self.pos += 1; // else
        if self.eat_kw("begin") {
            let mut depth = 1;
            while depth > 0 {
                match self.peek() {
                    None => return self.error(DiagCode::UnexpectedEof, "unterminated action block"),
                    Some(TokKind::Ident(s)) if s == "begin" => depth += 1,
                    Some(TokKind::Ident(s)) if s == "end" => depth -= 1,
                    _ => {}
                }
                self.pos += 1;
            }
        } else if matches!(self.peek(), Some(TokKind::System(_))) {
            self.pos += 1;
            if self.is_punct("(") {
                self.skip_balanced_parens()?;
            }
        } else {
            let msg = format!("expected system task after `else`, found {}", self.describe());
            return self.error(DiagCode::UnexpectedToken, msg);
        }
        let span = start.to(self.prev_span());
        self.warn(DiagCode::DiscardedAction, "action block discarded", span);
        Ok(())
    }

    fn skip_balanced_parens(&mut self) -> PResult<()> {
        let mut depth = 0;
        loop {
            match self.peek() {
                None => return self.error(DiagCode::UnexpectedEof, "unbalanced parentheses"),
                Some(TokKind::Punct("(")) => depth += 1,
                Some(TokKind::Punct(")")) => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        return Ok(());
                    }
                }
                Some(TokKind::Punct(";")) if depth > 0 => {
                    return self.error(DiagCode::UnexpectedToken, "`;` inside parentheses");
                }
                _ => {}
            }
            self.pos += 1;
        }
    }

    // ----- property / sequence / boolean expressions ----------------------

    fn property_expr(&mut self) -> PResult<PropertyExpr> {
        if self.is_punct("(") && self.paren_is_property_level() {
            let open = self.span();
            self.pos += 1;
            let inner = self.property_expr()?;
            if !self.eat_punct(")") {
                self.warn(DiagCode::ToleratedVariant, "unclosed `(` around property expression", open);
            }
            return Ok(inner);
        }
        let antecedent = self.sequence_expr()?;
        let op = if self.eat_punct("|->") {
            ImplicationKind::Overlapping
        } else if self.eat_punct("|=>") {
            ImplicationKind::NonOverlapping
        } else {
            return Ok(PropertyExpr::Seq { seq: antecedent });
        };
        let consequent = if self.is_punct("(") && self.paren_is_property_level() {
            return self.error(DiagCode::NestedImplication, "nested implications are not supported");
        } else {
            self.sequence_expr()?
        };
        if self.is_punct("|->") || self.is_punct("|=>") {
            return self.error(DiagCode::NestedImplication, "nested implications are not supported");
        }
        Ok(PropertyExpr::Implication { antecedent, op, consequent })
    }

    /// A `(` opens a property-level group when an implication occurs directly
    /// inside it, or when it is never closed before the end of the property.
    fn paren_is_property_level(&self) -> bool {
        let mut depth = 0usize;
        let mut i = self.pos;
        while let Some(t) = self.toks.get(i) {
            match &t.kind {
                TokKind::Punct("(") => depth += 1,
                TokKind::Punct(")") => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                TokKind::Punct("|->") | TokKind::Punct("|=>") if depth == 1 => return true,
                TokKind::Punct(";") => return true,
                TokKind::Ident(s) if matches!(s.as_str(), "endproperty" | "assert" | "property" | "end" | "else") => {
                    return true
                }
                _ => {}
            }
            i += 1;
        }
        true
    }

    /// A `(` groups a sequence when a `##` occurs directly inside it.
    fn paren_is_sequence(&self) -> bool {
        let mut depth = 0usize;
        let mut i = self.pos;
        while let Some(t) = self.toks.get(i) {
            match &t.kind {
                TokKind::Punct("(") => depth += 1,
                TokKind::Punct(")") => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                TokKind::Punct("##") if depth == 1 => return true,
                TokKind::Punct(";") => return false,
                _ => {}
            }
            i += 1;
        }
        false
    }

    fn sequence_expr(&mut self) -> PResult<SequenceExpr> {
        let mut seq = SequenceExpr { lead: None, elements: Vec::new(), delays: Vec::new() };
        let mut pending: Option<DelayRange> = None;
        if self.eat_punct("##") {
            pending = Some(self.delay()?);
        }
        loop {
            if self.is_punct("(") && self.paren_is_sequence() {
                self.pos += 1;
                let inner = self.sequence_expr()?;
                self.expect_punct(")")?;
                let joined = match (pending.take(), inner.lead) {
                    (Some(d), Some(l)) => Some(d.plus(l)),
                    (d, l) => d.or(l),
                };
                if seq.elements.is_empty() {
                    seq.lead = joined;
                } else {
                    seq.delays.push(joined.unwrap_or(DelayRange::fixed(0)));
                }
                seq.elements.extend(inner.elements);
                seq.delays.extend(inner.delays);
            } else {
                let e = self.bool_expr()?;
                if seq.elements.is_empty() {
                    seq.lead = pending.take();
                } else {
                    seq.delays.push(pending.take().expect("delay precedes element"));
                }
                seq.elements.push(e);
            }
            if self.eat_punct("##") {
                pending = Some(self.delay()?);
            } else {
                break;
            }
        }
        for kw in ["and", "or", "intersect", "throughout", "within", "until", "s_eventually", "eventually"] {
            if self.is_kw(kw) {
                let msg = format!("sequence operator `{kw}` is not supported");
                return self.error(DiagCode::UnsupportedConstruct, msg);
            }
        }
        if self.is_punct("[") {
            return self.error(DiagCode::UnsupportedConstruct, "sequence repetition is not supported");
        }
        Ok(seq)
    }

    fn delay(&mut self) -> PResult<DelayRange> {
        if self.eat_punct("[") {
            if self.is_punct("*") || self.is_punct("+") {
                return self.error(DiagCode::UnsupportedConstruct, "`##[*]`/`##[+]` are not supported");
            }
            let lo = self.delay_bound()?;
            self.expect_punct(":")?;
            if matches!(self.peek(), Some(TokKind::System(s)) if s == "$") || self.is_punct("$") {
                return self.error(DiagCode::UnsupportedConstruct, "unbounded delay ranges are not supported");
            }
            let hi = self.delay_bound()?;
            self.expect_punct("]")?;
            if hi < lo {
                let span = self.prev_span();
                return self.error_at(DiagCode::UnsupportedConstruct, format!("empty delay range [{lo}:{hi}]"), span);
            }
            Ok(DelayRange { lo, hi })
        } else {
            Ok(DelayRange::fixed(self.delay_bound()?))
        }
    }

    fn delay_bound(&mut self) -> PResult<u32> {
        let span = self.span();
        if matches!(self.peek(), Some(TokKind::Ident(_))) {
            return self.error(DiagCode::UnsupportedConstruct, "delays must be integer literals");
        }
        let v = self.expect_int()?;
        u32::try_from(v).or_else(|_| self.error_at(DiagCode::UnsupportedConstruct, "delay out of range", span))
    }

    pub(crate) fn bool_expr(&mut self) -> PResult<BoolExpr> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.and_expr()?;
        while self.eat_punct("||") {
            let rhs = self.and_expr()?;
            lhs = BoolExpr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.eq_expr()?;
        while self.eat_punct("&&") {
            let rhs = self.eq_expr()?;
            lhs = BoolExpr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn eq_expr(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.rel_expr()?;
        loop {
            let op = match self.peek() {
                Some(TokKind::Punct("==")) => CmpOp::Eq,
                Some(TokKind::Punct("!=")) => CmpOp::Ne,
                Some(TokKind::Punct(p @ ("===" | "!=="))) => {
                    let p = *p;
                    let span = self.span();
                    self.warn(
                        DiagCode::ToleratedVariant,
                        format!("case equality `{p}` evaluated as logical equality"),
                        span,
                    );
                    if p == "===" { CmpOp::Eq } else { CmpOp::Ne }
                }
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.rel_expr()?;
            lhs = BoolExpr::cmp(op, lhs, rhs);
        }
    }

    fn rel_expr(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.add_expr()?;
        loop {
            let op = match self.peek() {
                Some(TokKind::Punct("<")) => CmpOp::Lt,
                Some(TokKind::Punct("<=")) => CmpOp::Le,
                Some(TokKind::Punct(">")) => CmpOp::Gt,
                Some(TokKind::Punct(">=")) => CmpOp::Ge,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.add_expr()?;
            lhs = BoolExpr::cmp(op, lhs, rhs);
        }
    }

    fn add_expr(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.unary_expr()?;
        loop {
            let op = match self.peek() {
                Some(TokKind::Punct("+")) => ArithOp::Add,
                Some(TokKind::Punct("-")) => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary_expr()?;
            lhs = BoolExpr::arith(op, lhs, rhs);
        }
    }

    fn unary_expr(&mut self) -> PResult<BoolExpr> {
        if self.eat_punct("!") {
            return Ok(BoolExpr::not(self.unary_expr()?));
        }
        if self.is_punct("-") {
            if let Some(TokKind::Int(v)) = self.peek_at(1) {
                let v = *v;
                self.pos += 2;
                return Ok(BoolExpr::int(-v));
            }
            return self.error(DiagCode::UnsupportedConstruct, "unary minus is only supported on literals");
        }
        for op in ["~", "&", "|", "^"] {
            if self.is_punct(op) {
                let msg = format!("bitwise operator `{op}` is not supported");
                return self.error(DiagCode::UnsupportedConstruct, msg);
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<BoolExpr> {
        let tok = self.peek().cloned();
        match tok {
            Some(TokKind::Int(v)) => {
                self.pos += 1;
                Ok(BoolExpr::int(v))
            }
            Some(TokKind::UnknownInt) => {
                self.error(DiagCode::UnsupportedConstruct, "literals with x/z digits are not supported")
            }
            Some(TokKind::Label(text)) => {
                let span = self.span();
                self.pos += 1;
                self.warn(DiagCode::ToleratedVariant, format!("quoted state name `'{text}'` kept as a symbolic label"), span);
                Ok(BoolExpr::Label { text })
            }
            Some(TokKind::Ident(name)) => {
                if matches!(name.as_str(), "property" | "endproperty" | "assert" | "end" | "disable" | "else") {
                    let msg = format!("expected expression, found `{name}`");
                    return self.error(DiagCode::UnexpectedToken, msg);
                }
                self.pos += 1;
                if self.is_punct(".") || self.is_punct("::") {
                    return self.error(DiagCode::UnsupportedConstruct, "hierarchical references are not supported");
                }
                let index = if self.eat_punct("[") {
                    let idx = match self.peek().cloned() {
                        Some(TokKind::Int(v)) => Index::Lit(v),
                        Some(TokKind::Ident(v)) => Index::Var(v),
                        _ => {
                            let msg = format!("unsupported index {}", self.describe());
                            return self.error(DiagCode::UnsupportedConstruct, msg);
                        }
                    };
                    self.pos += 1;
                    if self.is_punct(":") || self.is_punct("+") || self.is_punct("-") {
                        return self.error(DiagCode::UnsupportedConstruct, "part-selects are not supported");
                    }
                    self.expect_punct("]")?;
                    Some(idx)
                } else {
                    None
                };
                if self.is_punct("(") {
                    return self.error(DiagCode::UnsupportedConstruct, format!("function call `{name}(...)` is not supported"));
                }
                Ok(BoolExpr::Ident { name, index })
            }
            Some(TokKind::System(f)) => {
                let span = self.span();
                self.pos += 1;
                match f.as_str() {
                    "$past" => {
                        self.expect_punct("(")?;
                        let e = self.bool_expr()?;
                        let depth = if self.eat_punct(",") {
                            let dspan = self.span();
                            let d = self.expect_int()?;
                            if d < 1 {
                                return self.error_at(DiagCode::UnsupportedConstruct, "`$past` depth must be at least 1", dspan);
                            }
                            if self.is_punct(",") {
                                return self.error(DiagCode::UnsupportedConstruct, "`$past` gating expressions are not supported");
                            }
                            Some(d as u32)
                        } else {
                            None
                        };
                        self.expect_punct(")")?;
                        Ok(BoolExpr::past(e, depth))
                    }
                    "$rose" | "$fell" | "$stable" => {
                        self.expect_punct("(")?;
                        let e = Box::new(self.bool_expr()?);
                        self.expect_punct(")")?;
                        Ok(match f.as_str() {
                            "$rose" => BoolExpr::Rose { expr: e },
                            "$fell" => BoolExpr::Fell { expr: e },
                            _ => BoolExpr::Stable { expr: e },
                        })
                    }
                    _ => self.error_at(
                        DiagCode::UnsupportedSystemFunction,
                        format!("system function `{f}` is not supported in expressions"),
                        span,
                    ),
                }
            }
            Some(TokKind::Punct("(")) => {
                self.pos += 1;
                let e = self.bool_expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            Some(TokKind::Str(_)) => self.error(DiagCode::UnsupportedConstruct, "string literals are not supported"),
            _ => {
                let msg = format!("expected expression, found {}", self.describe());
                self.error(DiagCode::UnexpectedToken, msg)
            }
        }
    }

    // ----- assert directive ----------------------------------------------

    fn assert_directive(&mut self, label: Option<String>, binding: Option<&GenerateBinding>) -> PResult<()> {
        let start = self.span();
        self.pos += 1; // assert
        if !self.eat_kw("property") {
            let msg = format!("expected `property` after `assert`, found {}", self.describe());
            return self.error(DiagCode::UnsupportedConstruct, msg);
        }
        let mut inline: Option<(String, PropertyParts)> = None;
        let name_span;
        let name = if self.is_punct("(") && (self.is_punct_at(1, "@") || (self.is_punct_at(1, "(") && {
            self.pos += 1;
            let r = self.wrap_run_reaches_at();
            self.pos -= 1;
            r
        })) {
            // inline property: assert property (@(posedge clk) ...);
            self.pos += 1;
            let parts = self.property_spec_inline()?;
            self.inline_count += 1;
            let n = label.clone().unwrap_or_else(|| format!("assertion_{}", self.inline_count));
            name_span = start;
            inline = Some((n.clone(), parts));
            n
        } else if self.eat_punct("(") {
            name_span = self.span();
            let n = self.expect_ident()?;
            self.expect_punct(")")?;
            n
        } else {
            name_span = self.span();
            let n = self.expect_ident()?;
            self.warn(DiagCode::ToleratedVariant, "`assert property` without parentheses", name_span);
            n
        };
        if self.is_kw("else") {
            self.action_block()?;
        }
        let inline_done = inline.is_some() && self.spec_semicolon;
        if !inline_done && !self.eat_punct(";") {
            if self.at_eof() || self.is_kw("property") || self.is_kw("assert") || self.is_kw("end") || self.is_kw("endgenerate") || self.is_kw("generate") {
                let span = self.prev_span();
                self.warn(DiagCode::ToleratedVariant, "missing `;` after assert directive", span);
            } else {
                let msg = format!("expected `;` after assert directive, found {}", self.describe());
                return self.error(DiagCode::UnexpectedToken, msg);
            }
        }
        let span = start.to(self.prev_span());

        let parts = match inline {
            Some((_, parts)) => parts,
            None => {
                if self.failed.contains(&name) {
                    return Ok(());
                }
                let idx = match self.pending.iter().rposition(|p| p.name == name && !p.asserted) {
                    Some(i) => i,
                    None => match self.pending.last() {
                        Some(last) if !last.asserted && self.out.iter().all(|a| a.name != name) => {
                            let msg = format!(
                                "assert names `{name}` but the preceding property is `{}`; bound to it",
                                last.name
                            );
                            self.warn(DiagCode::ToleratedVariant, msg, name_span);
                            self.pending.len() - 1
                        }
                        _ => {
                            return self.error_at(
                                DiagCode::UnknownProperty,
                                format!("assert references undeclared property `{name}`"),
                                name_span,
                            );
                        }
                    },
                };
                let p = &mut self.pending[idx];
                p.asserted = true;
                let parts = std::mem::replace(
                    &mut p.parts,
                    PropertyParts {
                        clock: String::new(),
                        disable: None,
                        body: PropertyExpr::Seq { seq: SequenceExpr::single(BoolExpr::int(1)) },
                    },
                );
                let pname = p.name.clone();
                let seq = p.seq;
                let binding = p.binding.clone().or_else(|| binding.cloned());
                return self.emit(pname, parts, binding.as_ref(), span, seq);
            }
        };
        let seq = self.next_seq;
        self.next_seq += 1;
        self.emit(name, parts, binding, span, seq)
    }

    fn property_spec_inline(&mut self) -> PResult<PropertyParts> {
        // the opening `(` of `assert property (` is already consumed; the
        // regular spec parser treats the matching `)` as a stray close
        let before = self.diags.len();
        let parts = self.property_spec()?;
        // drop the "unbalanced )" warning produced by the directive's own paren
        if let Some(i) = self.diags[before..]
            .iter()
            .position(|d| d.code == DiagCode::ToleratedVariant && d.message.starts_with("unbalanced `)`"))
        {
            self.diags.remove(before + i);
        } else {
            // `assert property (@(posedge c) a |-> b) ;` keeps the paren after `;`
            self.expect_punct(")")?;
        }
        Ok(parts)
    }

    fn emit(
        &mut self,
        name: String,
        parts: PropertyParts,
        binding: Option<&GenerateBinding>,
        span: Span,
        seq: usize,
    ) -> PResult<()> {
        if self.out.iter().any(|a| a.name == name) {
            return self.error_at(DiagCode::DuplicateAssertion, format!("assertion `{name}` defined twice"), span);
        }
        let mut ast = AssertionAst {
            name,
            clock: parts.clock,
            disable: parts.disable,
            body: parts.body,
            origin: Origin::default(),
            generate: binding.cloned(),
        };
        if let Some(b) = &ast.generate {
            if !ast.index_vars().contains(&b.loop_var) {
                let msg = format!("loop variable `{}` is not used by `{}`; generate wrapper dropped", b.loop_var, ast.name);
                self.warn(DiagCode::UnusedLoopVariable, msg, span);
                ast.generate = None;
            }
        }
        self.out.push(ast);
        self.out_seq.push(seq);
        Ok(())
    }

    /// Unasserted properties are still returned, in declaration order.
    fn finish(&mut self) {
        let unasserted: Vec<PendingProperty> = std::mem::take(&mut self.pending).into_iter().filter(|p| !p.asserted).collect();
        for p in unasserted {
            self.warn(DiagCode::UnassertedProperty, format!("property `{}` is never asserted", p.name), p.span);
            let _ = self.emit(p.name, p.parts, p.binding.as_ref(), p.span, p.seq);
        }
        let mut keyed: Vec<(usize, AssertionAst)> =
            std::mem::take(&mut self.out_seq).into_iter().zip(std::mem::take(&mut self.out)).collect();
        keyed.sort_by_key(|(seq, _)| *seq);
        self.out = keyed.into_iter().map(|(_, a)| a).collect();
    }
}
