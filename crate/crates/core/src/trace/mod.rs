// SPDX-License-Identifier: Apache-2.0

//! Clock-sampled traces and assertion evaluation over them.

pub mod eval;
pub mod oracle;
pub mod vcd;

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eval::evaluate;
pub use oracle::oracle_evaluate;
pub use vcd::{ingest_vcd, write_vcd, VcdError};

/// Sampled values of one signal, one entry per clock edge. `None` is x/z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub width: u32,
    pub values: Vec<Option<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub clock: String,
    /// `$timescale` text, when the trace came from a VCD.
    pub timescale: Option<String>,
    pub edge_times: Vec<u64>,
    signals: BTreeMap<String, Series>,
}

impl Trace {
    pub fn new(clock: &str, edge_times: Vec<u64>) -> Self {
        assert!(edge_times.windows(2).all(|w| w[0] < w[1]), "edge times must be strictly increasing");
        Trace { clock: clock.into(), timescale: None, edge_times, signals: BTreeMap::new() }
    }

    /// Trace with edges at 10, 20, 30, ...
    pub fn with_cycles(clock: &str, cycles: usize) -> Self {
        Trace::new(clock, (1..=cycles as u64).map(|k| 10 * k).collect())
    }

    pub fn cycles(&self) -> usize {
        self.edge_times.len()
    }

    pub fn insert(&mut self, name: &str, width: u32, values: Vec<Option<u64>>) {
        assert_eq!(values.len(), self.cycles(), "series `{name}` has the wrong length");
        assert!((1..=64).contains(&width));
        self.signals.insert(name.to_string(), Series { width, values });
    }

    /// Convenience for fully known series.
    pub fn insert_known(&mut self, name: &str, width: u32, values: &[u64]) {
        self.insert(name, width, values.iter().map(|v| Some(*v)).collect());
    }

    pub fn get(&self, name: &str) -> Option<&Series> {
        self.signals.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.signals.keys().map(String::as_str)
    }

    pub fn signals(&self) -> impl Iterator<Item = (&str, &Series)> {
        self.signals.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Last edge time minus first edge time.
    pub fn time_span(&self) -> u64 {
        match (self.edge_times.first(), self.edge_times.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    /// Text table, one row per signal; handy in test failure output.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (name, series) in &self.signals {
            write!(s, "{name:>16}:").unwrap();
            for v in &series.values {
                match v {
                    Some(v) => write!(s, " {v:>3}").unwrap(),
                    None => s.push_str("   x"),
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Per-assertion outcome over one trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub assertion_name: String,
    pub attempts: usize,
    pub passes: usize,
    pub fails: usize,
    pub vacuous: usize,
    pub disabled: usize,
    pub incomplete: usize,
    /// Start cycle of every failing attempt.
    pub fail_cycles: Vec<usize>,
    /// Failing attempts that saw an x/z value on a referenced signal.
    pub unknown_fails: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure_message: Option<String>,
}

impl EvalReport {
    pub fn new(name: &str) -> Self {
        EvalReport {
            assertion_name: name.to_string(),
            attempts: 0,
            passes: 0,
            fails: 0,
            vacuous: 0,
            disabled: 0,
            incomplete: 0,
            fail_cycles: Vec::new(),
            unknown_fails: 0,
            first_failure_message: None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.attempts == self.passes + self.fails + self.vacuous + self.disabled + self.incomplete
            && self.fail_cycles.len() == self.fails
    }
}

/// How one attempt ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Vacuous,
    Disabled,
    Incomplete,
}

/// Failure text fed back to the model.
pub fn failure_message(name: &str, trace: &Trace, start: usize, at: usize, what: &str) -> String {
    format!(
        "assertion `{name}` failed: attempt started at cycle {start} (time {}) failed at cycle {at} (time {}): {what}",
        trace.edge_times[start], trace.edge_times[at]
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("signal `{signal}` referenced by `{assertion}` is not in the trace")]
    SignalMissingFromTrace { assertion: String, signal: String },
    #[error("`{assertion}` is clocked by `{expected}` but the trace was sampled on `{found}`")]
    ClockMismatch { assertion: String, expected: String, found: String },
    #[error("`{assertion}` still has a generate loop; expand it first")]
    UnexpandedGenerate { assertion: String },
    #[error("instance too large for the oracle: {reason}")]
    InstanceTooLarge { reason: String },
}

/// Series names an identifier reads: `x[i]` resolves to an element named
/// `x[i]` when the trace has one, otherwise to bit `i` of `x`.
pub(crate) fn resolve<'t>(trace: &'t Trace, name: &str, index: Option<i64>) -> Option<(&'t Series, Option<u32>)> {
    match index {
        None => trace.get(name).map(|s| (s, None)),
        Some(i) => {
            if let Some(s) = trace.get(&format!("{name}[{i}]")) {
                return Some((s, None));
            }
            let s = trace.get(name)?;
            if i >= 0 && (i as u32) < s.width {
                Some((s, Some(i as u32)))
            } else {
                None
            }
        }
    }
}
