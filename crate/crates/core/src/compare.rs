// SPDX-License-Identifier: Apache-2.0

//! Counting assertions two sets have in common.
//!
//! Two assertions match structurally when their normalized properties are
//! equal, and behaviorally when their verdict vectors agree on every probe
//! trace. Behavioral agreement is evidence on the probes only, so it is
//! reported as "probe-consistent", not as equivalence.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::sva::{expand_generate, normalize, AssertionAst};
use crate::trace::{evaluate, EvalError, Trace};

/// (passes, fails, vacuous) per probe; disabled attempts count as vacuous.
pub type Verdicts = Vec<(usize, usize, usize)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchKind {
    Structural,
    Behavioral,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchVerdict {
    pub left: String,
    pub right: String,
    pub kind: MatchKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_agreement: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub count: usize,
    pub pairs: Vec<MatchVerdict>,
    pub unmatched_left: Vec<String>,
    pub unmatched_right: Vec<String>,
    /// Assertions left out of behavioral matching, with the reason.
    pub excluded: Vec<String>,
    pub probes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_seed: Option<u64>,
}

/// Evaluates `ast` (expanded over `parameters`) on each probe. A generate
/// assertion yields one entry per instance per probe, instance-major.
pub fn verdict_vector(
    ast: &AssertionAst,
    probes: &[Trace],
    parameters: &BTreeMap<String, i64>,
) -> Result<Verdicts, EvalError> {
    let instances = expand_generate(ast, parameters).map_err(|e| EvalError::UnexpandedGenerate { assertion: e.to_string() })?;
    let mut out = Vec::with_capacity(instances.len() * probes.len());
    for inst in &instances {
        for p in probes {
            let r = evaluate(inst, p)?;
            out.push((r.passes, r.fails, r.vacuous + r.disabled));
        }
    }
    Ok(out)
}

fn agreement(a: &Verdicts, b: &Verdicts) -> f64 {
    if a.is_empty() || a.len() != b.len() {
        return 0.0;
    }
    a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / a.len() as f64
}

/// Greedy matching: structural pairs first, then behavioral pairs, each in
/// left declaration order taking the first free right assertion.
pub fn match_sets(
    left: &[AssertionAst],
    right: &[AssertionAst],
    probes: &[Trace],
    parameters: &BTreeMap<String, i64>,
) -> MatchReport {
    let nl: Vec<AssertionAst> = left.iter().map(normalize).collect();
    let nr: Vec<AssertionAst> = right.iter().map(normalize).collect();
    let mut excluded = Vec::new();
    let mut vectors = |side: &str, set: &[AssertionAst]| -> Vec<Option<Verdicts>> {
        set.iter()
            .map(|a| {
                if probes.is_empty() {
                    return None;
                }
                match verdict_vector(a, probes, parameters) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        excluded.push(format!("{side} `{}`: {e}", a.name));
                        None
                    }
                }
            })
            .collect()
    };
    let vl = vectors("left", left);
    let vr = vectors("right", right);

    let mut taken_l = vec![false; left.len()];
    let mut taken_r = vec![false; right.len()];
    let mut pairs = Vec::new();
    for (i, a) in nl.iter().enumerate() {
        if let Some(j) = (0..right.len()).find(|&j| !taken_r[j] && a.same_property(&nr[j])) {
            taken_l[i] = true;
            taken_r[j] = true;
            let probe_agreement = match (&vl[i], &vr[j]) {
                (Some(x), Some(y)) => Some(agreement(x, y)),
                _ => None,
            };
            pairs.push(MatchVerdict {
                left: left[i].name.clone(),
                right: right[j].name.clone(),
                kind: MatchKind::Structural,
                probe_agreement,
            });
        }
    }
    for i in 0..left.len() {
        let Some(x) = vl[i].as_ref().filter(|_| !taken_l[i]) else { continue };
        if let Some(j) = (0..right.len()).find(|&j| !taken_r[j] && vr[j].as_ref() == Some(x)) {
            taken_l[i] = true;
            taken_r[j] = true;
            pairs.push(MatchVerdict {
                left: left[i].name.clone(),
                right: right[j].name.clone(),
                kind: MatchKind::Behavioral,
                probe_agreement: Some(1.0),
            });
        }
    }
    MatchReport {
        count: pairs.len(),
        pairs,
        unmatched_left: (0..left.len()).filter(|&i| !taken_l[i]).map(|i| left[i].name.clone()).collect(),
        unmatched_right: (0..right.len()).filter(|&j| !taken_r[j]).map(|j| right[j].name.clone()).collect(),
        excluded,
        probes: probes.len(),
        probe_seed: None,
    }
}

impl MatchReport {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.probe_seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("match report serializes")
    }

    pub fn render_table(&self) -> String {
        let w = self.pairs.iter().map(|p| &p.left).chain(&self.unmatched_left).map(String::len).chain([4]).max().unwrap_or(4);
        let mut out = String::new();
        writeln!(out, "{:w$}  {:28}  match", "left", "right").unwrap();
        for p in &self.pairs {
            let kind = match p.kind {
                MatchKind::Structural => "structural",
                MatchKind::Behavioral => "behavioral (probe-consistent)",
                MatchKind::None => "none",
            };
            writeln!(out, "{:w$}  {:28}  {kind}", p.left, p.right).unwrap();
        }
        for n in &self.unmatched_left {
            writeln!(out, "{n:w$}  {:28}  none", "-").unwrap();
        }
        for n in &self.unmatched_right {
            writeln!(out, "{:w$}  {n:28}  none", "-").unwrap();
        }
        write!(out, "common: {} over {} probes", self.count, self.probes).unwrap();
        if let Some(s) = self.probe_seed {
            write!(out, " (seed {s})").unwrap();
        }
        out.push('\n');
        for e in &self.excluded {
            writeln!(out, "excluded {e}").unwrap();
        }
        out
    }
}
