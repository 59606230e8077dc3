// SPDX-License-Identifier: Apache-2.0

use super::diag::{DiagCode, Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokKind {
    Ident(String),
    /// `$name`
    System(String),
    Int(i64),
    /// Literal containing x/z digits.
    UnknownInt,
    Str(String),
    /// `'text'` quoted state names.
    Label(String),
    Punct(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokKind,
    pub span: Span,
}

const PUNCT: &[&str] = &[
    "|->", "|=>", "===", "!==", "##", "==", "!=", "<=", ">=", "&&", "||", "++", "+=", "-=", "(", ")",
    "[", "]", "{", "}", ";", ":", ",", "@", "!", "<", ">", "+", "-", "=", "~", "&", "|", "^", "*",
    "/", "%", ".", "?", "#",
];

pub fn lex(src: &str, diags: &mut Vec<Diagnostic>) -> Vec<Token> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if src[i..].starts_with("//") {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if src[i..].starts_with("/*") {
            match src[i + 2..].find("*/") {
                Some(p) => i += p + 4,
                None => {
                    diags.push(Diagnostic::error(
                        DiagCode::UnexpectedEof,
                        "unterminated block comment",
                        Span::new(i, src.len()),
                    ));
                    i = bytes.len();
                }
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == b'_' {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$') {
                i += 1;
            }
            out.push(Token { kind: TokKind::Ident(src[start..i].to_string()), span: Span::new(start, i) });
        } else if c == b'$' && i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphabetic() || bytes[i + 1] == b'_') {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { kind: TokKind::System(src[start..i].to_string()), span: Span::new(start, i) });
        } else if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                i += 1;
            }
            let mut end = i;
            // sized literal: 8'hFF, 1'b1
            if i < bytes.len() && bytes[i] == b'\'' && i + 1 < bytes.len() && is_base(bytes, i + 1) {
                end = scan_based(bytes, i + 1);
            }
            i = end;
            out.push(number_token(&src[start..end], Span::new(start, end), diags));
        } else if c == b'\'' {
            if i + 1 < bytes.len() && is_base(bytes, i + 1) && !looks_like_label(src, i) {
                let end = scan_based(bytes, i + 1);
                i = end;
                out.push(number_token(&src[start..end], Span::new(start, end), diags));
            } else if i + 1 < bytes.len() && matches!(bytes[i + 1], b'0' | b'1') && !looks_like_label(src, i) {
                // fill literal '0 / '1
                let v = (bytes[i + 1] - b'0') as i64;
                i += 2;
                out.push(Token { kind: TokKind::Int(v), span: Span::new(start, i) });
            } else {
                let line_end = src[i + 1..].find('\n').map_or(src.len(), |p| i + 1 + p);
                match src[i + 1..line_end].find('\'') {
                    Some(p) => {
                        let text = src[i + 1..i + 1 + p].to_string();
                        i = i + 2 + p;
                        out.push(Token { kind: TokKind::Label(text), span: Span::new(start, i) });
                    }
                    None => {
                        i += 1;
                        diags.push(Diagnostic::error(
                            DiagCode::InvalidCharacter,
                            "stray `'`",
                            Span::new(start, i),
                        ));
                    }
                }
            }
        } else if c == b'"' {
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' && bytes[i] != b'\n' {
                if bytes[i] == b'\\' {
                    i += 1;
                }
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'"' {
                i += 1;
                out.push(Token {
                    kind: TokKind::Str(src[start + 1..i - 1].to_string()),
                    span: Span::new(start, i),
                });
            } else {
                diags.push(Diagnostic::error(
                    DiagCode::UnexpectedEof,
                    "unterminated string literal",
                    Span::new(start, i.max(start + 1)),
                ));
            }
        } else {
            let rest = &src[i..];
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    i += p.len();
                    out.push(Token { kind: TokKind::Punct(p), span: Span::new(start, i) });
                }
                None => {
                    let ch = rest.chars().next().unwrap();
                    i += ch.len_utf8();
                    diags.push(Diagnostic::error(
                        DiagCode::InvalidCharacter,
                        format!("unexpected character `{ch}`"),
                        Span::new(start, i),
                    ));
                }
            }
        }
    }
    out
}

fn is_base(bytes: &[u8], i: usize) -> bool {
    let j = if matches!(bytes.get(i), Some(b's' | b'S')) { i + 1 } else { i };
    matches!(bytes.get(j), Some(b'b' | b'B' | b'o' | b'O' | b'd' | b'D' | b'h' | b'H'))
        && bytes.get(j + 1).is_some_and(|b| b.is_ascii_hexdigit() || matches!(b, b'x' | b'X' | b'z' | b'Z' | b'?'))
}

fn scan_based(bytes: &[u8], mut i: usize) -> usize {
    if matches!(bytes.get(i), Some(b's' | b'S')) {
        i += 1;
    }
    i += 1;
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'?') {
        i += 1;
    }
    i
}

/// `'bad'` is a label while `'b1` is an unsized binary literal.
fn looks_like_label(src: &str, quote: usize) -> bool {
    let line_end = src[quote + 1..].find('\n').map_or(src.len(), |p| quote + 1 + p);
    match src[quote + 1..line_end].find('\'') {
        Some(p) => {
            let inner = &src[quote + 1..quote + 1 + p];
            inner.chars().any(|c| c.is_ascii_alphabetic()) && inner.chars().any(|c| !c.is_ascii_hexdigit())
                || inner.contains(' ')
        }
        None => false,
    }
}

fn number_token(text: &str, span: Span, diags: &mut Vec<Diagnostic>) -> Token {
    let clean = text.replace('_', "");
    let kind = match clean.find('\'') {
        None => match clean.parse::<i64>() {
            Ok(v) => TokKind::Int(v),
            Err(_) => {
                diags.push(Diagnostic::error(DiagCode::UnsupportedConstruct, "integer literal too large", span));
                TokKind::Int(0)
            }
        },
        Some(q) => {
            let rest = clean[q + 1..].trim_start_matches(['s', 'S']);
            let radix = match rest.chars().next().map(|c| c.to_ascii_lowercase()) {
                Some('b') => 2,
                Some('o') => 8,
                Some('d') => 10,
                _ => 16,
            };
            let digits = &rest[1..];
            if digits.chars().any(|c| matches!(c, 'x' | 'X' | 'z' | 'Z' | '?')) {
                TokKind::UnknownInt
            } else {
                match i64::from_str_radix(digits, radix) {
                    Ok(v) => TokKind::Int(v),
                    Err(_) => {
                        diags.push(Diagnostic::error(
                            DiagCode::UnsupportedConstruct,
                            format!("cannot read literal `{text}`"),
                            span,
                        ));
                        TokKind::Int(0)
                    }
                }
            }
        }
    };
    Token { kind, span }
}
