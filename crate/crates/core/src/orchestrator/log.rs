// SPDX-License-Identifier: Apache-2.0

//! Append-only JSON-lines session log.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::classify::FailureClass;
use super::prompt::Stage;
use super::{SessionSummary, Status};
use crate::trace::EvalReport;

pub const LOG_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceInfo {
    pub name: String,
    pub cycles: usize,
    pub time_span: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum LogEvent {
    SessionStart {
        design: String,
        tool: String,
        backend: String,
        template_version: u32,
        max_iterations: u32,
        traces: Vec<TraceInfo>,
    },
    Prompt {
        stage: Stage,
        iteration: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        assertion: Option<String>,
        body: String,
    },
    Response {
        backend: String,
        raw: String,
        blocks: Vec<String>,
    },
    Diagnostics {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        assertion: Option<String>,
        diagnostics: Vec<String>,
    },
    Evaluation {
        assertion: String,
        class: FailureClass,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        report: Option<EvalReport>,
    },
    Status {
        assertion: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from: Option<Status>,
        to: Status,
        iterations_used: u32,
    },
    SessionEnd {
        summary: SessionSummary,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub schema: u32,
    pub seq: usize,
    pub timestamp_ms: u64,
    #[serde(flatten)]
    pub event: LogEvent,
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error("session log {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("session log line {line}: {message}")]
    Malformed { line: usize, message: String },
}

pub fn now_ms() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

/// Collects records in memory and, when backed by a file, appends each one
/// as soon as it is recorded.
pub struct SessionLog {
    path: Option<PathBuf>,
    file: Option<File>,
    records: Vec<LogRecord>,
    /// Records already present in the file from an earlier run.
    skip: usize,
    clock: fn() -> u64,
}

impl SessionLog {
    pub fn in_memory() -> Self {
        SessionLog { path: None, file: None, records: Vec::new(), skip: 0, clock: now_ms }
    }

    /// Starts a fresh log file, truncating any old one.
    pub fn create(path: &Path) -> Result<Self, LogError> {
        let file = File::create(path).map_err(|e| io(path, e))?;
        Ok(SessionLog { path: Some(path.into()), file: Some(file), records: Vec::new(), skip: 0, clock: now_ms })
    }

    /// Reopens a log for a resumed run. The first `existing.len()` records
    /// produced by the rerun are already in the file and are not written
    /// again.
    pub fn resume(path: &Path, existing: &[LogRecord]) -> Result<Self, LogError> {
        let text = std::fs::read_to_string(path).map_err(|e| io(path, e))?;
        // drop a torn last line so appends start on a fresh one
        let keep: usize = text.split_inclusive('\n').filter(|l| l.ends_with('\n')).map(str::len).sum();
        let file = OpenOptions::new().write(true).open(path).map_err(|e| io(path, e))?;
        file.set_len(keep as u64).map_err(|e| io(path, e))?;
        let mut file = file;
        use std::io::Seek;
        file.seek(std::io::SeekFrom::End(0)).map_err(|e| io(path, e))?;
        Ok(SessionLog {
            path: Some(path.into()),
            file: Some(file),
            records: Vec::new(),
            skip: existing.len(),
            clock: now_ms,
        })
    }

    /// Replaces the timestamp source, e.g. with a constant in tests.
    pub fn with_clock(mut self, clock: fn() -> u64) -> Self {
        self.clock = clock;
        self
    }

    pub fn now(&self) -> u64 {
        (self.clock)()
    }

    pub fn append(&mut self, event: LogEvent) -> Result<(), LogError> {
        let rec = LogRecord { schema: LOG_SCHEMA, seq: self.records.len(), timestamp_ms: (self.clock)(), event };
        if rec.seq >= self.skip {
            if let Some(f) = &mut self.file {
                let line = serde_json::to_string(&rec).expect("log record serializes");
                let path = self.path.as_deref().unwrap_or(Path::new("?"));
                writeln!(f, "{line}").and_then(|_| f.flush()).map_err(|e| io(path, e))?;
            }
        }
        self.records.push(rec);
        Ok(())
    }

    pub fn records(&self) -> &[LogRecord] {
        &self.records
    }

    pub fn to_jsonl(&self) -> String {
        self.records.iter().map(|r| serde_json::to_string(r).expect("log record serializes") + "\n").collect()
    }
}

fn io(path: &Path, source: std::io::Error) -> LogError {
    LogError::Io { path: path.display().to_string(), source }
}

/// Parses a log. A final line without a newline is a torn write and is
/// ignored.
pub fn read_log(text: &str) -> Result<Vec<LogRecord>, LogError> {
    let mut out = Vec::new();
    for (i, line) in text.split_inclusive('\n').enumerate() {
        if !line.ends_with('\n') {
            break;
        }
        if line.trim().is_empty() {
            continue;
        }
        let rec: LogRecord =
            serde_json::from_str(line).map_err(|e| LogError::Malformed { line: i + 1, message: e.to_string() })?;
        if rec.schema != LOG_SCHEMA {
            return Err(LogError::Malformed { line: i + 1, message: format!("unsupported schema {}", rec.schema) });
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn load_log(path: &Path) -> Result<Vec<LogRecord>, LogError> {
    read_log(&std::fs::read_to_string(path).map_err(|e| io(path, e))?)
}

/// The comparison form of a log: every line with `timestamp_ms` removed.
pub fn strip_timestamps(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| match serde_json::from_str::<serde_json::Value>(l) {
            Ok(serde_json::Value::Object(mut m)) => {
                m.remove("timestamp_ms");
                serde_json::to_string(&m).expect("json value serializes") + "\n"
            }
            _ => format!("{l}\n"),
        })
        .collect()
}

/// Assistant replies recorded in a log, in order.
pub fn recorded_responses(records: &[LogRecord]) -> Vec<String> {
    records
        .iter()
        .filter_map(|r| match &r.event {
            LogEvent::Response { raw, .. } => Some(raw.clone()),
            _ => None,
        })
        .collect()
}

/// The summary written at the end of a completed session.
pub fn final_summary(records: &[LogRecord]) -> Option<&SessionSummary> {
    records.iter().rev().find_map(|r| match &r.event {
        LogEvent::SessionEnd { summary } => Some(summary),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn event(n: u32) -> LogEvent {
        LogEvent::Prompt { stage: Stage::Spec, iteration: n, assertion: None, body: format!("b{n}") }
    }

    #[test]
    fn roundtrip_and_strip() {
        let mut log = SessionLog::in_memory().with_clock(|| 42);
        log.append(event(0)).unwrap();
        log.append(LogEvent::Response { backend: "replay".into(), raw: "r".into(), blocks: vec![] }).unwrap();
        let text = log.to_jsonl();
        assert_eq!(read_log(&text).unwrap(), log.records());
        let stripped = strip_timestamps(&text);
        assert!(!stripped.contains("timestamp_ms"));
        let other = SessionLog::in_memory().with_clock(|| 7);
        let mut other = other;
        other.append(event(0)).unwrap();
        other.append(LogEvent::Response { backend: "replay".into(), raw: "r".into(), blocks: vec![] }).unwrap();
        assert_ne!(other.to_jsonl(), text);
        assert_eq!(strip_timestamps(&other.to_jsonl()), stripped);
        assert_eq!(recorded_responses(log.records()), vec!["r".to_string()]);
    }

    #[test]
    fn torn_line_ignored_and_resume_appends() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.jsonl");
        let mut log = SessionLog::create(&path).unwrap();
        log.append(event(0)).unwrap();
        log.append(event(1)).unwrap();
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("{\"schema\":1,\"se");
        std::fs::write(&path, &text).unwrap();
        let existing = load_log(&path).unwrap();
        assert_eq!(existing.len(), 2);
        let mut again = SessionLog::resume(&path, &existing).unwrap();
        for n in 0..3 {
            again.append(event(n)).unwrap();
        }
        let back = load_log(&path).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[2].seq, 2);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = read_log("{\"schema\":1}\n").unwrap_err();
        assert!(matches!(err, LogError::Malformed { line: 1, .. }));
    }
}
