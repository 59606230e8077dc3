// SPDX-License-Identifier: Apache-2.0

//! VCD reading (preponed sampling on the rising clock edge) and writing.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use super::Trace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VcdError {
    #[error("clock `{0}` is not declared as a 1-bit variable in the VCD")]
    ClockNotFound(String),
    #[error("malformed VCD at line {line}: {message}")]
    MalformedVcd { line: usize, message: String },
    #[error("clock `{0}` never rises")]
    NoEdges(String),
}

struct Var {
    name: String,
    width: u32,
}

fn malformed(line: usize, message: impl Into<String>) -> VcdError {
    VcdError::MalformedVcd { line, message: message.into() }
}

/// Whitespace-separated words with their 1-based line numbers.
fn words(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().flat_map(|(i, l)| l.split_whitespace().map(move |w| (i + 1, w)))
}

/// Reads `source` and samples every variable at each rising edge of `clock`.
/// The value at an edge is the one in effect strictly before the edge's
/// timestamp; x and z read as unknown.
pub fn ingest_vcd(source: &str, clock: &str) -> Result<Trace, VcdError> {
    let mut it = words(source).peekable();
    let mut vars: Vec<Var> = Vec::new();
    let mut by_code: HashMap<String, Vec<usize>> = HashMap::new();
    let mut scope: Vec<String> = Vec::new();
    let mut timescale = None;
    let mut last_line = 1;

    // header
    loop {
        let Some((line, w)) = it.next() else {
            return Err(malformed(last_line, "missing `$enddefinitions`"));
        };
        last_line = line;
        match w {
            "$enddefinitions" => {
                expect_end(&mut it, line)?;
                break;
            }
            "$timescale" => {
                let body = collect_until_end(&mut it, line)?;
                timescale = Some(body.join(" "));
            }
            "$scope" => {
                let body = collect_until_end(&mut it, line)?;
                if body.len() != 2 {
                    return Err(malformed(line, "expected `$scope <kind> <name> $end`"));
                }
                scope.push(body[1].to_string());
            }
            "$upscope" => {
                expect_end(&mut it, line)?;
                if scope.pop().is_none() {
                    return Err(malformed(line, "`$upscope` without matching `$scope`"));
                }
            }
            "$var" => {
                let body = collect_until_end(&mut it, line)?;
                if body.len() < 4 {
                    return Err(malformed(line, "expected `$var <type> <width> <id> <name> [range] $end`"));
                }
                if body[0] == "real" {
                    return Err(malformed(line, "real variables are not supported"));
                }
                let width: u32 = body[1].parse().map_err(|_| malformed(line, format!("bad width `{}`", body[1])))?;
                if width == 0 || width > 64 {
                    return Err(malformed(line, format!("width {width} outside 1..64")));
                }
                let code = body[2].to_string();
                let mut name = body[3].to_string();
                // `x [3]` names an array element; `x [7:0]` is just a range
                if let Some(r) = body.get(4) {
                    if r.starts_with('[') && r.ends_with(']') && !r.contains(':') {
                        name.push_str(r);
                    }
                }
                let idx = vars.len();
                vars.push(Var { name, width });
                by_code.entry(code).or_default().push(idx);
            }
            "$date" | "$version" | "$comment" => {
                collect_until_end(&mut it, line)?;
            }
            other => return Err(malformed(line, format!("unexpected `{other}` in header"))),
        }
    }

    // first declaration of a name wins (signals with the same leaf name in
    // nested scopes are shadowed)
    let mut first_of: HashMap<&str, usize> = HashMap::new();
    for (i, v) in vars.iter().enumerate() {
        first_of.entry(v.name.as_str()).or_insert(i);
    }
    let clk_idx = match first_of.get(clock) {
        Some(&i) if vars[i].width == 1 => i,
        _ => return Err(VcdError::ClockNotFound(clock.to_string())),
    };

    let mut state: Vec<Option<u64>> = vec![None; vars.len()];
    let mut samples: Vec<Vec<Option<u64>>> = vec![Vec::new(); vars.len()];
    let mut edges: Vec<u64> = Vec::new();
    let mut now: Option<u64> = None;
    let mut group: Vec<(usize, Option<u64>)> = Vec::new();

    let flush = |group: &mut Vec<(usize, Option<u64>)>,
                 state: &mut Vec<Option<u64>>,
                 samples: &mut Vec<Vec<Option<u64>>>,
                 edges: &mut Vec<u64>,
                 now: Option<u64>| {
        let before = state[clk_idx];
        let mut after = before;
        for (i, v) in group.iter() {
            if *i == clk_idx {
                after = *v;
            }
        }
        if before == Some(0) && after == Some(1) {
            edges.push(now.unwrap_or(0));
            for (i, s) in samples.iter_mut().enumerate() {
                s.push(state[i]);
            }
        }
        for (i, v) in group.drain(..) {
            state[i] = v;
        }
    };

    while let Some((line, w)) = it.next() {
        if let Some(t) = w.strip_prefix('#') {
            let t: u64 = t.parse().map_err(|_| malformed(line, format!("bad timestamp `{w}`")))?;
            if now.is_some_and(|n| t < n) {
                return Err(malformed(line, format!("timestamp {t} goes backwards")));
            }
            if now != Some(t) {
                flush(&mut group, &mut state, &mut samples, &mut edges, now);
                now = Some(t);
            }
            continue;
        }
        match w {
            "$dumpvars" | "$dumpall" | "$dumpon" | "$dumpoff" | "$end" => continue,
            "$comment" => {
                collect_until_end(&mut it, line)?;
                continue;
            }
            _ => {}
        }
        let first = w.as_bytes()[0];
        match first {
            b'0' | b'1' | b'x' | b'X' | b'z' | b'Z' => {
                let code = &w[1..];
                let v = match first {
                    b'0' => Some(0),
                    b'1' => Some(1),
                    _ => None,
                };
                let idxs = by_code.get(code).ok_or_else(|| malformed(line, format!("unknown identifier code `{code}`")))?;
                for &i in idxs {
                    group.push((i, v));
                }
            }
            b'b' | b'B' => {
                let bits = &w[1..];
                let Some((_, code)) = it.next() else {
                    return Err(malformed(line, "vector change without identifier code"));
                };
                let idxs = by_code.get(code).ok_or_else(|| malformed(line, format!("unknown identifier code `{code}`")))?;
                let v = parse_bits(bits).map_err(|m| malformed(line, m))?;
                for &i in idxs {
                    group.push((i, v));
                }
            }
            b'r' | b'R' => {
                let Some((_, code)) = it.next() else {
                    return Err(malformed(line, "real change without identifier code"));
                };
                let idxs = by_code.get(code).ok_or_else(|| malformed(line, format!("unknown identifier code `{code}`")))?;
                for &i in idxs {
                    group.push((i, None));
                }
            }
            _ => return Err(malformed(line, format!("unexpected `{w}` in value changes"))),
        }
    }
    flush(&mut group, &mut state, &mut samples, &mut edges, now);

    if edges.is_empty() {
        return Err(VcdError::NoEdges(clock.to_string()));
    }
    let mut trace = Trace::new(clock, edges);
    trace.timescale = timescale;
    for (i, v) in vars.iter().enumerate() {
        if first_of.get(v.name.as_str()) == Some(&i) {
            trace.insert(&v.name, v.width, std::mem::take(&mut samples[i]));
        }
    }
    Ok(trace)
}

fn parse_bits(bits: &str) -> Result<Option<u64>, String> {
    if bits.is_empty() {
        return Err("empty vector value".into());
    }
    if bits.len() > 64 {
        return Err(format!("vector value `{bits}` wider than 64 bits"));
    }
    let mut v: u64 = 0;
    let mut unknown = false;
    for c in bits.chars() {
        v <<= 1;
        match c {
            '0' => {}
            '1' => v |= 1,
            'x' | 'X' | 'z' | 'Z' => unknown = true,
            _ => return Err(format!("bad bit `{c}` in `{bits}`")),
        }
    }
    Ok(if unknown { None } else { Some(v) })
}

fn collect_until_end<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, line: usize) -> Result<Vec<&'a str>, VcdError> {
    let mut out = Vec::new();
    for (_, w) in it.by_ref() {
        if w == "$end" {
            return Ok(out);
        }
        out.push(w);
    }
    Err(malformed(line, "missing `$end`"))
}

fn expect_end<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, line: usize) -> Result<(), VcdError> {
    match it.next() {
        Some((_, "$end")) => Ok(()),
        Some((l, w)) => Err(malformed(l, format!("expected `$end`, found `{w}`"))),
        None => Err(malformed(line, "missing `$end`")),
    }
}

fn id_code(mut n: usize) -> String {
    let mut s = String::new();
    loop {
        s.push((b'!' + (n % 94) as u8) as char);
        n /= 94;
        if n == 0 {
            return s;
        }
        n -= 1;
    }
}

fn format_value(width: u32, v: Option<u64>, code: &str) -> String {
    match (width, v) {
        (1, Some(b)) => format!("{}{code}", b & 1),
        (1, None) => format!("x{code}"),
        (_, Some(b)) => format!("b{b:b} {code}"),
        (_, None) => format!("bx {code}"),
    }
}

/// Writes `trace` as a VCD whose re-ingestion on the same clock gives back
/// the same samples. The clock rises at each edge time and falls halfway to
/// the next; values for edge k+1 change on that falling edge. Needs the
/// first edge after time 0 and edges at least 2 units apart.
pub fn write_vcd(trace: &Trace, module: &str) -> String {
    let times = &trace.edge_times;
    assert!(times.first().is_some_and(|t| *t > 0), "first edge must be after time 0");
    assert!(times.windows(2).all(|w| w[1] - w[0] >= 2), "edges must be at least 2 time units apart");
    let mut out = String::new();
    writeln!(out, "$timescale {} $end", trace.timescale.as_deref().unwrap_or("1ns")).unwrap();
    writeln!(out, "$scope module {module} $end").unwrap();
    let clk_code = id_code(0);
    writeln!(out, "$var wire 1 {clk_code} {} $end", trace.clock).unwrap();
    let sigs: Vec<(&str, &super::Series, String)> = trace
        .signals()
        .filter(|(n, _)| *n != trace.clock)
        .enumerate()
        .map(|(i, (n, s))| (n, s, id_code(i + 1)))
        .collect();
    for (name, s, code) in &sigs {
        let kind = if s.width == 1 { "wire" } else { "reg" };
        match name.find('[') {
            Some(p) => writeln!(out, "$var {kind} {} {code} {} {} $end", s.width, &name[..p], &name[p..]).unwrap(),
            None if s.width > 1 => writeln!(out, "$var {kind} {} {code} {name} [{}:0] $end", s.width, s.width - 1).unwrap(),
            None => writeln!(out, "$var {kind} {} {code} {name} $end", s.width).unwrap(),
        }
    }
    writeln!(out, "$upscope $end").unwrap();
    writeln!(out, "$enddefinitions $end").unwrap();
    writeln!(out, "#0").unwrap();
    writeln!(out, "$dumpvars").unwrap();
    writeln!(out, "0{clk_code}").unwrap();
    for (_, s, code) in &sigs {
        writeln!(out, "{}", format_value(s.width, s.values[0], code)).unwrap();
    }
    writeln!(out, "$end").unwrap();
    for (k, &t) in times.iter().enumerate() {
        writeln!(out, "#{t}").unwrap();
        writeln!(out, "1{clk_code}").unwrap();
        let fall = match times.get(k + 1) {
            Some(next) => t + (next - t) / 2,
            None => t + 5,
        };
        writeln!(out, "#{fall}").unwrap();
        writeln!(out, "0{clk_code}").unwrap();
        if k + 1 < times.len() {
            for (_, s, code) in &sigs {
                if s.values[k + 1] != s.values[k] {
                    writeln!(out, "{}", format_value(s.width, s.values[k + 1], code)).unwrap();
                }
            }
        }
    }
    out
}
