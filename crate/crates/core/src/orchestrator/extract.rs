// SPDX-License-Identifier: Apache-2.0

//! Pulling assertion text out of free-form model replies.

/// Candidate assertion snippets, each a substring of `raw`.
///
/// Fenced code blocks win. Without fences, `generate ... endgenerate` and
/// `property ... endproperty` regions are scanned for (`end property` is
/// accepted), each extended over a directly following `assert` statement.
pub fn extract_sva(raw: &str) -> Vec<&str> {
    let fenced = fenced_blocks(raw);
    if !fenced.is_empty() {
        return fenced;
    }
    scan_properties(raw)
}

fn fenced_blocks(raw: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = 0;
    while let Some(open) = raw[rest..].find("```") {
        let open = rest + open;
        // skip the info string up to end of line
        let body = match raw[open + 3..].find('\n') {
            Some(nl) => open + 3 + nl + 1,
            None => break,
        };
        let Some(close) = raw[body..].find("```") else { break };
        let close = body + close;
        if !raw[body..close].trim().is_empty() {
            out.push(&raw[body..close]);
        }
        rest = close + 3;
    }
    out
}

fn word_at(raw: &str, at: usize, word: &str) -> bool {
    let bytes = raw.as_bytes();
    let ident = |b: u8| b.is_ascii_alphanumeric() || b == b'_' || b == b'$';
    raw[at..].starts_with(word)
        && (at == 0 || !ident(bytes[at - 1]))
        && bytes.get(at + word.len()).is_none_or(|b| !ident(*b))
}

fn find_word(raw: &str, from: usize, word: &str) -> Option<usize> {
    let mut at = from;
    while let Some(p) = raw[at..].find(word) {
        if word_at(raw, at + p, word) {
            return Some(at + p);
        }
        at += p + word.len();
    }
    None
}

/// End of `endproperty` / `end property` after `from`.
fn property_end(raw: &str, from: usize) -> Option<usize> {
    let a = find_word(raw, from, "endproperty").map(|p| p + "endproperty".len());
    let b = find_word(raw, from, "end").and_then(|p| {
        let after = raw[p + 3..].trim_start();
        after.starts_with("property").then(|| raw.len() - after.len() + "property".len())
    });
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Extends `end` over an `assert ... ;` that follows on the next lines.
fn take_assert(raw: &str, end: usize) -> usize {
    let rest = &raw[end..];
    let skipped = rest.len() - rest.trim_start().len();
    let at = end + skipped;
    if word_at(raw, at, "assert") {
        if let Some(semi) = raw[at..].find(';') {
            return at + semi + 1;
        }
    }
    end
}

fn scan_properties(raw: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut at = 0;
    loop {
        let gen = find_word(raw, at, "generate");
        let prop = find_word(raw, at, "property");
        let start = match (gen, prop) {
            (Some(g), Some(p)) => g.min(p),
            (g, p) => match g.or(p) {
                Some(x) => x,
                None => break,
            },
        };
        let end = if Some(start) == gen {
            find_word(raw, start, "endgenerate").map(|p| p + "endgenerate".len())
        } else {
            property_end(raw, start + "property".len()).map(|e| take_assert(raw, e))
        };
        let Some(end) = end else { break };
        out.push(&raw[start..end]);
        at = end;
    }
    out
}
