// SPDX-License-Identifier: Apache-2.0

//! Declaration-level Verilog extraction.
//!
//! Only the parts of a module needed to know its signal vocabulary are
//! understood: the header (ANSI or non-ANSI port lists, `#(...)` parameter
//! ports), port/net/variable declarations and integer parameters. Procedural
//! code, continuous assignments and instances are skipped by block matching.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Input,
    Output,
    Inout,
    Internal,
}

impl Direction {
    fn keyword(self) -> &'static str {
        match self {
            Direction::Input => "input",
            Direction::Output => "output",
            Direction::Inout => "inout",
            Direction::Internal => "",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleHint {
    Clock,
    Reset,
    Data,
    Unknown,
}

/// One port, net or variable of a module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalDecl {
    pub name: String,
    pub direction: Direction,
    pub width: u32,
    /// Element count for unpacked (or outer packed) array dimensions.
    pub array_len: Option<u32>,
    pub role_hint: RoleHint,
}

impl SignalDecl {
    pub fn is_array(&self) -> bool {
        self.array_len.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalInventory {
    pub module_name: String,
    pub signals: Vec<SignalDecl>,
    pub parameters: BTreeMap<String, i64>,
}

impl SignalInventory {
    pub fn get(&self, name: &str) -> Option<&SignalDecl> {
        self.signals.iter().find(|s| s.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("inventory serializes")
    }

    /// Renders the inventory as a declaration-only module that re-extracts to
    /// an equal inventory.
    pub fn render_declarations(&self) -> String {
        let mut out = String::new();
        write!(out, "module {}", self.module_name).unwrap();
        if !self.parameters.is_empty() {
            let params: Vec<String> = self
                .parameters
                .iter()
                .map(|(k, v)| format!("parameter {k} = {v}"))
                .collect();
            write!(out, " #({})", params.join(", ")).unwrap();
        }
        let ports: Vec<String> = self
            .signals
            .iter()
            .filter(|s| s.direction != Direction::Internal)
            .map(|s| format!("{} logic {}", s.direction.keyword(), declarator(s)))
            .collect();
        if ports.is_empty() {
            out.push_str(" ();\n");
        } else {
            out.push_str(" (\n");
            out.push_str(&ports.iter().map(|p| format!("  {p}")).collect::<Vec<_>>().join(",\n"));
            out.push_str("\n);\n");
        }
        for s in self.signals.iter().filter(|s| s.direction == Direction::Internal) {
            writeln!(out, "  logic {};", declarator(s)).unwrap();
        }
        out.push_str("endmodule\n");
        out
    }
}

fn declarator(s: &SignalDecl) -> String {
    let mut d = String::new();
    if s.width > 1 {
        write!(d, "[{}:0] ", s.width - 1).unwrap();
    }
    d.push_str(&s.name);
    if let Some(n) = s.array_len {
        write!(d, " [{n}]").unwrap();
    }
    d
}

/// Glob patterns used to tag clock and reset signals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RolePatterns {
    pub clock: Vec<String>,
    pub reset: Vec<String>,
}

impl Default for RolePatterns {
    fn default() -> Self {
        RolePatterns {
            clock: vec!["clk*".into(), "*_clk".into(), "clk_i".into()],
            reset: vec!["rst*".into(), "*rst_n*".into(), "rst_ni".into()],
        }
    }
}

/// `*` matches any run of characters; everything else is literal.
pub fn glob_match(pattern: &str, name: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let n: Vec<char> = name.chars().collect();
    let (mut pi, mut ni) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ni < n.len() {
        if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ni));
            pi += 1;
        } else if pi < p.len() && p[pi] == n[ni] {
            pi += 1;
            ni += 1;
        } else if let Some((sp, sn)) = star {
            pi = sp + 1;
            ni = sn + 1;
            star = Some((sp, sn + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

pub fn infer_role(name: &str, patterns: &RolePatterns) -> RoleHint {
    if patterns.clock.iter().any(|p| glob_match(p, name)) {
        RoleHint::Clock
    } else if patterns.reset.iter().any(|p| glob_match(p, name)) {
        RoleHint::Reset
    } else {
        RoleHint::Data
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("no module declaration found")]
    NoModuleFound,
    #[error("module `{0}` not found")]
    ModuleNotFound(String),
    #[error("module `{module}` is not closed by `endmodule` (line {line})")]
    UnbalancedBlock { module: String, line: usize },
    #[error("malformed range for `{signal}` at line {line}: {reason}")]
    MalformedRange {
        signal: String,
        line: usize,
        reason: String,
    },
    #[error("escaped identifiers are not supported (line {0})")]
    EscapedIdentifier(usize),
    #[error("preprocessor directive `{directive}` is not supported (line {line})")]
    UnsupportedDirective { directive: String, line: usize },
    #[error("unterminated block comment starting at line {0}")]
    UnterminatedComment(usize),
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, Default)]
pub struct ExtractOptions {
    /// Select a module by name instead of the first one in the file.
    pub module: Option<String>,
    /// Ignore body declarations and keep only the module's ports.
    pub header_only: bool,
    pub roles: RolePatterns,
}

pub fn extract_signals(source: &str) -> Result<SignalInventory, ExtractError> {
    extract_signals_with(source, &ExtractOptions::default())
}

pub fn extract_signals_with(
    source: &str,
    opts: &ExtractOptions,
) -> Result<SignalInventory, ExtractError> {
    let tokens = lex(source)?;
    let mut p = Parser { toks: &tokens, pos: 0 };
    let mut seen_module = false;
    loop {
        match p.find_module() {
            None => {
                return Err(match (&opts.module, seen_module) {
                    (Some(name), true) => ExtractError::ModuleNotFound(name.clone()),
                    _ => ExtractError::NoModuleFound,
                });
            }
            Some(_) => {
                seen_module = true;
                let inv = p.module(opts)?;
                match &opts.module {
                    Some(name) if *name != inv.module_name => continue,
                    _ => return Ok(inv),
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Punct(&'static str),
    Str,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
}

const PUNCT: &[&str] = &[
    "<<=", ">>=", "<=", ">=", "==", "!=", "&&", "||", "<<", ">>", "::", "+:", "-:", "**", "(", ")",
    "[", "]", "{", "}", ";", ",", ":", "=", "+", "-", "*", "/", "%", "<", ">", "!", "~", "&", "|",
    "^", "?", "@", "#", ".", "'", "$",
];

fn lex(src: &str) -> Result<Vec<Token>, ExtractError> {
    let bytes = src.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            line += 1;
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if src[i..].starts_with("//") {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if src[i..].starts_with("/*") {
            let start = line;
            i += 2;
            loop {
                if i + 1 >= bytes.len() {
                    return Err(ExtractError::UnterminatedComment(start));
                }
                if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                    i += 2;
                    break;
                }
                if bytes[i] == b'\n' {
                    line += 1;
                }
                i += 1;
            }
        } else if c == b'`' {
            let s = i;
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            return Err(ExtractError::UnsupportedDirective {
                directive: src[s..i].to_string(),
                line,
            });
        } else if c == b'\\' {
            return Err(ExtractError::EscapedIdentifier(line));
        } else if c == b'"' {
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' {
                if bytes[i] == b'\\' {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'\n' {
                    line += 1;
                }
                i += 1;
            }
            i += 1;
            out.push(Token { tok: Tok::Str, line });
        } else if c.is_ascii_alphabetic() || c == b'_' || (c == b'$' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_alphabetic()) {
            let s = i;
            i += 1;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$')
            {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[s..i].to_string()), line });
        } else if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            // sized literal: 8'hFF, 4'b1010, 32'd5, 'sd3
            if i < bytes.len() && bytes[i] == b'\'' {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'?') {
                    i += 1;
                }
            }
            out.push(Token { tok: Tok::Number(src[s..i].to_string()), line });
        } else if c == b'\'' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_alphanumeric() {
            let s = i;
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Number(src[s..i].to_string()), line });
        } else {
            let rest = &src[i..];
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    out.push(Token { tok: Tok::Punct(p), line });
                    i += p.len();
                }
                None => {
                    let ch = rest.chars().next().unwrap();
                    return Err(ExtractError::Syntax {
                        line,
                        message: format!("unexpected character `{ch}`"),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn parse_number(text: &str) -> Option<i64> {
    let text = text.replace('_', "");
    match text.find('\'') {
        None => text.parse().ok(),
        Some(q) => {
            let rest = text[q + 1..].trim_start_matches(['s', 'S']);
            let mut chars = rest.chars();
            let base = chars.next()?;
            let digits: String = chars.collect();
            let radix = match base.to_ascii_lowercase() {
                'b' => 2,
                'o' => 8,
                'd' => 10,
                'h' => 16,
                _ => return None,
            };
            i64::from_str_radix(&digits, radix).ok()
        }
    }
}

// ---------------------------------------------------------------------------
// parser

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

const BLOCK_OPEN: &[&str] = &[
    "begin", "case", "casez", "casex", "fork", "function", "task", "generate", "class", "covergroup",
    "property", "sequence", "clocking", "specify",
];
const BLOCK_CLOSE: &[&str] = &[
    "end", "endcase", "join", "join_any", "join_none", "endfunction", "endtask", "endgenerate",
    "endclass", "endgroup", "endproperty", "endsequence", "endclocking", "endspecify",
];
const NET_TYPES: &[&str] = &["wire", "reg", "logic", "tri", "wand", "wor", "bit", "uwire"];
const INT_TYPES: &[&str] = &["integer", "int", "byte", "shortint", "longint"];

#[derive(Default)]
struct ModuleState {
    name: String,
    signals: Vec<SignalDecl>,
    parameters: BTreeMap<String, i64>,
}

impl ModuleState {
    fn upsert(&mut self, decl: SignalDecl) {
        match self.signals.iter_mut().find(|s| s.name == decl.name) {
            // a non-ANSI port followed by its net declaration refines the port
            Some(existing) => {
                if decl.direction != Direction::Internal {
                    existing.direction = decl.direction;
                }
                if decl.width > 1 || existing.width == 0 {
                    existing.width = decl.width;
                }
                if decl.array_len.is_some() {
                    existing.array_len = decl.array_len;
                }
            }
            None => self.signals.push(decl),
        }
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.pos + n).map(|t| &t.tok)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|t| t.line)
            .unwrap_or(1)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(s)) if *s == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExtractError> {
        Err(ExtractError::Syntax { line: self.line(), message: message.into() })
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ExtractError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.syntax(format!("expected `{p}`, found {}", self.describe()))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of file".into(),
            Some(Tok::Ident(s)) | Some(Tok::Number(s)) => format!("`{s}`"),
            Some(Tok::Punct(p)) => format!("`{p}`"),
            Some(Tok::Str) => "string literal".into(),
        }
    }

    fn ident(&mut self) -> Result<String, ExtractError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.syntax(format!("expected identifier, found {}", self.describe())),
        }
    }

    /// Advances to the next `module` keyword; returns its position.
    fn find_module(&mut self) -> Option<usize> {
        while let Some(t) = self.peek() {
            if matches!(t, Tok::Ident(s) if s == "module" || s == "macromodule") {
                return Some(self.pos);
            }
            self.pos += 1;
        }
        None
    }

    fn module(&mut self, opts: &ExtractOptions) -> Result<SignalInventory, ExtractError> {
        let start_line = self.line();
        self.bump(); // module
        let mut st = ModuleState::default();
        // lifetime qualifiers: module automatic foo
        if self.is_kw("automatic") || self.is_kw("static") {
            self.bump();
        }
        st.name = self.ident()?;
        // package imports in header
        while self.is_kw("import") {
            self.skip_to_semicolon();
        }
        if self.eat_punct("#") {
            self.expect_punct("(")?;
            self.parameter_ports(&mut st)?;
        }
        if self.eat_punct("(") {
            self.port_list(&mut st)?;
        }
        self.expect_punct(";")?;

        loop {
            match self.peek() {
                None => {
                    return Err(ExtractError::UnbalancedBlock { module: st.name, line: start_line })
                }
                Some(Tok::Ident(kw)) => {
                    let kw = kw.clone();
                    match kw.as_str() {
                        "endmodule" => {
                            self.bump();
                            break;
                        }
                        "module" => {
                            return Err(ExtractError::UnbalancedBlock { module: st.name, line: start_line })
                        }
                        "input" | "output" | "inout" if !opts.header_only => {
                            self.bump();
                            let dir = direction_of(&kw);
                            self.declaration(&mut st, dir)?;
                        }
                        "parameter" | "localparam" => {
                            self.bump();
                            self.parameter_decl(&mut st)?;
                        }
                        k if (NET_TYPES.contains(&k) || INT_TYPES.contains(&k)) && !opts.header_only => {
                            self.declaration(&mut st, Direction::Internal)?;
                        }
                        _ => self.skip_item(),
                    }
                }
                Some(_) => self.skip_item(),
            }
        }

        let roles = &opts.roles;
        for s in &mut st.signals {
            s.role_hint = infer_role(&s.name, roles);
            if s.width == 0 {
                s.width = 1;
            }
        }
        Ok(SignalInventory { module_name: st.name, signals: st.signals, parameters: st.parameters })
    }

    fn skip_to_semicolon(&mut self) {
        while let Some(t) = self.bump() {
            if matches!(t, Tok::Punct(";")) {
                break;
            }
        }
    }

    /// Skips one module item: a `;`-terminated statement or a balanced block,
    /// including trailing `else` branches.
    fn skip_item(&mut self) {
        let mut depth: usize = 0;
        let mut parens: usize = 0;
        while let Some(t) = self.peek().cloned() {
            match &t {
                Tok::Ident(s) if depth == 0 && parens == 0 && (s == "endmodule" || s == "module") => {
                    return;
                }
                Tok::Ident(s) if BLOCK_OPEN.contains(&s.as_str()) => {
                    // `wait fork` / `disable fork` are statements, not blocks
                    let prev_is_stmt = self.pos > 0
                        && matches!(&self.toks[self.pos - 1].tok, Tok::Ident(p) if p == "wait" || p == "disable");
                    if !(s == "fork" && prev_is_stmt) {
                        depth += 1;
                    }
                    self.pos += 1;
                }
                Tok::Ident(s) if BLOCK_CLOSE.contains(&s.as_str()) => {
                    depth = depth.saturating_sub(1);
                    self.pos += 1;
                    // optional block label: end : name
                    if self.is_punct(":") {
                        self.pos += 1;
                        if matches!(self.peek(), Some(Tok::Ident(_))) {
                            self.pos += 1;
                        }
                    }
                    if depth == 0 && parens == 0 && !self.is_kw("else") {
                        return;
                    }
                }
                Tok::Punct("(") | Tok::Punct("[") | Tok::Punct("{") => {
                    parens += 1;
                    self.pos += 1;
                }
                Tok::Punct(")") | Tok::Punct("]") | Tok::Punct("}") => {
                    parens = parens.saturating_sub(1);
                    self.pos += 1;
                }
                Tok::Punct(";") => {
                    self.pos += 1;
                    if depth == 0 && parens == 0 && !self.is_kw("else") {
                        return;
                    }
                }
                _ => self.pos += 1,
            }
        }
    }

    fn parameter_ports(&mut self, st: &mut ModuleState) -> Result<(), ExtractError> {
        // #( parameter A = 1, B = 2, parameter int C = 3 )
        loop {
            if self.eat_punct(")") {
                return Ok(());
            }
            if self.is_kw("parameter") || self.is_kw("localparam") {
                self.bump();
            }
            self.skip_param_type()?;
            let name = self.ident()?;
            self.eat_dims_unused();
            if self.eat_punct("=") {
                let value = self.const_expr_until(&[",", ")"], st)?;
                if let Some(v) = value {
                    st.parameters.insert(name, v);
                }
            }
            if !self.eat_punct(",") {
                self.expect_punct(")")?;
                return Ok(());
            }
        }
    }

    fn skip_param_type(&mut self) -> Result<(), ExtractError> {
        // optional data type: int, int unsigned, logic [7:0], integer, bit, type
        loop {
            match self.peek() {
                Some(Tok::Ident(s))
                    if NET_TYPES.contains(&s.as_str())
                        || INT_TYPES.contains(&s.as_str())
                        || s == "signed"
                        || s == "unsigned"
                        || s == "type" =>
                {
                    self.bump();
                }
                Some(Tok::Punct("[")) => {
                    self.skip_brackets();
                }
                Some(Tok::Ident(_)) => {
                    // a user type name followed by the parameter name
                    if matches!(self.peek_at(1), Some(Tok::Ident(_))) {
                        self.bump();
                    } else {
                        return Ok(());
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn skip_brackets(&mut self) {
        let mut depth = 0;
        while let Some(t) = self.bump() {
            match t {
                Tok::Punct("[") => depth += 1,
                Tok::Punct("]") => {
                    depth -= 1;
                    if depth == 0 {
                        return;
                    }
                }
                _ => {}
            }
        }
    }

    fn eat_dims_unused(&mut self) {
        while self.is_punct("[") {
            self.skip_brackets();
        }
    }

    fn parameter_decl(&mut self, st: &mut ModuleState) -> Result<(), ExtractError> {
        self.skip_param_type()?;
        loop {
            let name = self.ident()?;
            self.eat_dims_unused();
            self.expect_punct("=")?;
            if let Some(v) = self.const_expr_until(&[",", ";"], st)? {
                st.parameters.insert(name, v);
            }
            if !self.eat_punct(",") {
                self.expect_punct(";")?;
                return Ok(());
            }
        }
    }

    /// Collects tokens up to one of `stops` (at nesting depth 0) and tries to
    /// evaluate them as an integer constant. Non-integer parameters (strings,
    /// types, expressions over unknown names) evaluate to `None`.
    fn const_expr_until(
        &mut self,
        stops: &[&str],
        st: &ModuleState,
    ) -> Result<Option<i64>, ExtractError> {
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            match t {
                Tok::Punct(p) if depth == 0 && stops.contains(p) => break,
                Tok::Punct("(") | Tok::Punct("[") | Tok::Punct("{") => depth += 1,
                Tok::Punct(")") | Tok::Punct("]") | Tok::Punct("}") => depth = depth.saturating_sub(1),
                _ => {}
            }
            self.pos += 1;
        }
        Ok(eval_const(&self.toks[start..self.pos], &st.parameters).ok())
    }

    fn port_list(&mut self, st: &mut ModuleState) -> Result<(), ExtractError> {
        if self.eat_punct(")") {
            return Ok(());
        }
        let mut current: Option<(Direction, u32, Option<u32>)> = None;
        loop {
            if let Some(Tok::Ident(kw)) = self.peek() {
                if matches!(kw.as_str(), "input" | "output" | "inout") {
                    let dir = direction_of(kw);
                    self.bump();
                    let width = self.type_and_packed(st, "port")?;
                    current = Some((dir, width.0, width.1));
                } else if NET_TYPES.contains(&kw.as_str()) || INT_TYPES.contains(&kw.as_str()) {
                    // `logic [3:0] foo` continuing the previous direction
                    let width = self.type_and_packed(st, "port")?;
                    let dir = current.map(|c| c.0).unwrap_or(Direction::Inout);
                    current = Some((dir, width.0, width.1));
                } else if self.is_punct("[") {
                    let width = self.type_and_packed(st, "port")?;
                    let dir = current.map(|c| c.0).unwrap_or(Direction::Inout);
                    current = Some((dir, width.0, width.1));
                }
            }
            let name = self.ident()?;
            let unpacked = self.unpacked_dims(st, &name)?;
            match current {
                Some((dir, width, packed_outer)) => {
                    st.upsert(SignalDecl {
                        name,
                        direction: dir,
                        width,
                        array_len: unpacked.or(packed_outer),
                        role_hint: RoleHint::Unknown,
                    });
                }
                // non-ANSI: direction comes from a body declaration
                None => st.upsert(SignalDecl {
                    name,
                    direction: Direction::Inout,
                    width: 0,
                    array_len: None,
                    role_hint: RoleHint::Unknown,
                }),
            }
            if self.eat_punct("=") {
                // default port value
                self.const_expr_until(&[",", ")"], st)?;
            }
            if self.eat_punct(",") {
                continue;
            }
            self.expect_punct(")")?;
            return Ok(());
        }
    }

    /// Parses an optional net/var type, signedness and packed dimensions.
    /// Returns (element width, outer packed count when more than one packed
    /// dimension is present).
    fn type_and_packed(
        &mut self,
        st: &ModuleState,
        what: &str,
    ) -> Result<(u32, Option<u32>), ExtractError> {
        let mut int_width = None;
        loop {
            match self.peek() {
                Some(Tok::Ident(s)) if NET_TYPES.contains(&s.as_str()) || s == "var" => {
                    self.bump();
                }
                Some(Tok::Ident(s)) if INT_TYPES.contains(&s.as_str()) => {
                    int_width = Some(match s.as_str() {
                        "byte" => 8,
                        "shortint" => 16,
                        "longint" => 64,
                        _ => 32,
                    });
                    self.bump();
                }
                Some(Tok::Ident(s)) if s == "signed" || s == "unsigned" => {
                    self.bump();
                }
                _ => break,
            }
        }
        let mut dims = Vec::new();
        while self.is_punct("[") {
            dims.push(self.range(st, what)?);
        }
        if let Some(w) = int_width {
            return Ok((w, None));
        }
        Ok(match dims.len() {
            0 => (1, None),
            1 => (dims[0], None),
            _ => (dims[1..].iter().product(), Some(dims[0])),
        })
    }

    /// `[msb:lsb]` -> |msb-lsb|+1, `[N]` -> N.
    fn range(&mut self, st: &ModuleState, what: &str) -> Result<u32, ExtractError> {
        let line = self.line();
        self.expect_punct("[")?;
        let start = self.pos;
        let mut depth = 0usize;
        let mut colon = None;
        while let Some(t) = self.peek() {
            match t {
                Tok::Punct("[") | Tok::Punct("(") => depth += 1,
                Tok::Punct("]") if depth == 0 => break,
                Tok::Punct("]") | Tok::Punct(")") => depth -= 1,
                Tok::Punct(":") if depth == 0 => colon = Some(self.pos),
                _ => {}
            }
            self.pos += 1;
        }
        let end = self.pos;
        self.expect_punct("]")?;
        let bad = |reason: String| ExtractError::MalformedRange {
            signal: what.to_string(),
            line,
            reason,
        };
        let width = match colon {
            Some(c) => {
                let msb = eval_const(&self.toks[start..c], &st.parameters).map_err(bad)?;
                let lsb = eval_const(&self.toks[c + 1..end], &st.parameters).map_err(bad)?;
                (msb - lsb).unsigned_abs() + 1
            }
            None => {
                let n = eval_const(&self.toks[start..end], &st.parameters).map_err(bad)?;
                if n <= 0 {
                    return Err(ExtractError::MalformedRange {
                        signal: what.to_string(),
                        line,
                        reason: format!("non-positive size {n}"),
                    });
                }
                n as u64
            }
        };
        u32::try_from(width).map_err(|_| ExtractError::MalformedRange {
            signal: what.to_string(),
            line,
            reason: "range too large".into(),
        })
    }

    fn unpacked_dims(&mut self, st: &ModuleState, name: &str) -> Result<Option<u32>, ExtractError> {
        let mut count: Option<u32> = None;
        while self.is_punct("[") {
            let n = self.range(st, name)?;
            count = Some(count.unwrap_or(1) * n);
        }
        Ok(count)
    }

    fn declaration(&mut self, st: &mut ModuleState, dir: Direction) -> Result<(), ExtractError> {
        let (width, packed_outer) = self.type_and_packed(st, "declaration")?;
        loop {
            let name = self.ident()?;
            let unpacked = self.unpacked_dims(st, &name).map_err(|e| match e {
                ExtractError::MalformedRange { line, reason, .. } => {
                    ExtractError::MalformedRange { signal: name.clone(), line, reason }
                }
                other => other,
            })?;
            st.upsert(SignalDecl {
                name,
                direction: dir,
                width,
                array_len: unpacked.or(packed_outer),
                role_hint: RoleHint::Unknown,
            });
            if self.eat_punct("=") {
                self.const_expr_until(&[",", ";"], st)?;
            }
            if self.eat_punct(",") {
                continue;
            }
            if self.eat_punct(";") {
                return Ok(());
            }
            return self.syntax(format!("expected `;` after declaration, found {}", self.describe()));
        }
    }
}

fn direction_of(kw: &str) -> Direction {
    match kw {
        "input" => Direction::Input,
        "output" => Direction::Output,
        _ => Direction::Inout,
    }
}

/// Integer constant evaluation over `+ - * / %`, parentheses, literals and
/// known parameters.
fn eval_const(toks: &[Token], params: &BTreeMap<String, i64>) -> Result<i64, String> {
    struct Ev<'a> {
        toks: &'a [Token],
        pos: usize,
        params: &'a BTreeMap<String, i64>,
    }
    impl Ev<'_> {
        fn peek_punct(&self) -> Option<&'static str> {
            match self.toks.get(self.pos).map(|t| &t.tok) {
                Some(Tok::Punct(p)) => Some(p),
                _ => None,
            }
        }
        fn sum(&mut self) -> Result<i64, String> {
            let mut v = self.product()?;
            while let Some(op @ ("+" | "-")) = self.peek_punct() {
                self.pos += 1;
                let r = self.product()?;
                v = if op == "+" { v.checked_add(r) } else { v.checked_sub(r) }.ok_or("overflow")?;
            }
            Ok(v)
        }
        fn product(&mut self) -> Result<i64, String> {
            let mut v = self.unary()?;
            while let Some(op @ ("*" | "/" | "%")) = self.peek_punct() {
                self.pos += 1;
                let r = self.unary()?;
                v = match op {
                    "*" => v.checked_mul(r).ok_or("overflow")?,
                    _ if r == 0 => return Err("division by zero".into()),
                    "/" => v / r,
                    _ => v % r,
                };
            }
            Ok(v)
        }
        fn unary(&mut self) -> Result<i64, String> {
            if self.peek_punct() == Some("-") {
                self.pos += 1;
                return Ok(-self.unary()?);
            }
            if self.peek_punct() == Some("+") {
                self.pos += 1;
                return self.unary();
            }
            self.atom()
        }
        fn atom(&mut self) -> Result<i64, String> {
            let t = self.toks.get(self.pos).map(|t| t.tok.clone());
            self.pos += 1;
            match t {
                Some(Tok::Number(n)) => parse_number(&n).ok_or_else(|| format!("bad number `{n}`")),
                Some(Tok::Ident(name)) => self
                    .params
                    .get(&name)
                    .copied()
                    .ok_or_else(|| format!("unresolved name `{name}`")),
                Some(Tok::Punct("(")) => {
                    let v = self.sum()?;
                    if self.peek_punct() != Some(")") {
                        return Err("expected `)`".into());
                    }
                    self.pos += 1;
                    Ok(v)
                }
                Some(other) => Err(format!("unexpected token {other:?}")),
                None => Err("empty expression".into()),
            }
        }
    }
    let mut ev = Ev { toks, pos: 0, params };
    let v = ev.sum()?;
    if ev.pos != toks.len() {
        return Err("trailing tokens in constant expression".into());
    }
    Ok(v)
}
