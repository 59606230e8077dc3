// SPDX-License-Identifier: Apache-2.0

//! Cycle model of the trimmed timer and probe trace generation.
//!
//! The model produces sampled values directly: registers (`tick_count`,
//! `mtime`) show the value held before each edge, combinational outputs
//! (`tick`, `mtime_d`, `intr`) are computed from those samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trace::Trace;

/// Number of harts (`N` in the RTL).
pub const HARTS: usize = 2;

pub const CLOCK: &str = "clk_i";

/// Per-cycle inputs of one timer run.
#[derive(Debug, Clone, PartialEq)]
pub struct TimerStimulus {
    pub rst_ni: Vec<bool>,
    pub active: Vec<bool>,
    pub prescaler: Vec<u64>,
    pub step: Vec<u64>,
    pub mtimecmp: [u64; HARTS],
}

impl TimerStimulus {
    /// Reset for `reset` cycles, then active with fixed settings.
    pub fn steady(cycles: usize, reset: usize, prescaler: u64, step: u64, mtimecmp: [u64; HARTS]) -> Self {
        TimerStimulus {
            rst_ni: (0..cycles).map(|c| c >= reset).collect(),
            active: (0..cycles).map(|c| c >= reset).collect(),
            prescaler: vec![prescaler; cycles],
            step: vec![step; cycles],
            mtimecmp,
        }
    }

    pub fn cycles(&self) -> usize {
        self.rst_ni.len()
    }

    /// Drops `active` over `[from, to)`.
    pub fn pause(mut self, from: usize, to: usize) -> Self {
        for c in from..to.min(self.cycles()) {
            self.active[c] = false;
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimerState {
    pub tick_count: u64,
    pub mtime: u64,
}

fn tick(active: bool, tick_count: u64, prescaler: u64) -> bool {
    active && tick_count >= prescaler
}

/// Next register values after an edge sampled with `s` and these inputs.
pub fn timer_next(s: TimerState, active: bool, prescaler: u64, step: u64) -> TimerState {
    let t = tick(active, s.tick_count, prescaler);
    TimerState {
        tick_count: if !active || t { 0 } else { s.tick_count + 1 },
        mtime: if t { s.mtime + step } else { s.mtime },
    }
}

/// Runs the model; the asynchronous reset clears registers in any cycle
/// where `rst_ni` is sampled low.
pub fn simulate_timer(stim: &TimerStimulus) -> Trace {
    let k = stim.cycles();
    assert!(k > 0, "empty stimulus");
    for v in [stim.active.len(), stim.prescaler.len(), stim.step.len()] {
        assert_eq!(v, k, "stimulus vectors differ in length");
    }
    let mut states = Vec::with_capacity(k);
    let mut s = TimerState { tick_count: 0, mtime: 0 };
    for c in 0..k {
        if !stim.rst_ni[c] {
            s = TimerState { tick_count: 0, mtime: 0 };
        }
        states.push(s);
        s = timer_next(s, stim.active[c], stim.prescaler[c], stim.step[c]);
    }
    let mut t = Trace::with_cycles(CLOCK, k);
    let col = |f: &dyn Fn(usize) -> u64| (0..k).map(f).collect::<Vec<u64>>();
    t.insert_known("rst_ni", 1, &col(&|c| stim.rst_ni[c] as u64));
    t.insert_known("active", 1, &col(&|c| stim.active[c] as u64));
    t.insert_known("prescaler", 12, &col(&|c| stim.prescaler[c]));
    t.insert_known("step", 8, &col(&|c| stim.step[c]));
    t.insert_known("tick_count", 12, &col(&|c| states[c].tick_count));
    t.insert_known("tick", 1, &col(&|c| tick(stim.active[c], states[c].tick_count, stim.prescaler[c]) as u64));
    t.insert_known("mtime", 64, &col(&|c| states[c].mtime));
    t.insert_known("mtime_d", 64, &col(&|c| states[c].mtime + stim.step[c]));
    for (h, cmp) in stim.mtimecmp.iter().enumerate() {
        t.insert_known(&format!("mtimecmp[{h}]"), 64, &vec![*cmp; k]);
    }
    let intr = col(&|c| {
        (0..HARTS).fold(0, |acc, h| acc | (((stim.active[c] && states[c].mtime >= stim.mtimecmp[h]) as u64) << h))
    });
    t.insert_known("intr", HARTS as u32, &intr);
    t
}

/// Named stimuli behind the committed timer traces.
///
/// `delay`: `active` drops for two cycles while `tick_count` is mid-count
/// and an interrupt is raised. `reset`: reset pulsed mid-run.
pub fn fixture_stimuli() -> Vec<(&'static str, TimerStimulus)> {
    vec![
        ("timer_delay", TimerStimulus::steady(16, 2, 2, 2, [4, 6]).pause(9, 11)),
        ("timer_reset", {
            let mut s = TimerStimulus::steady(14, 2, 1, 1, [2, 1]);
            s.rst_ni[7] = false;
            s.rst_ni[8] = false;
            s
        }),
    ]
}

/// How `rst_ni`/`active` may change in random timer probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardPolicy {
    /// Changes only after a cycle where an increment was not pending, so
    /// guarding by `disable iff` and guarding in the antecedent agree.
    TickAligned,
    /// Changes at any cycle.
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub cycles: usize,
    pub random: usize,
    pub toggle_prob: f64,
    pub seed: u64,
    pub policy: GuardPolicy,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { cycles: 12, random: 20, toggle_prob: 0.2, seed: 7, policy: GuardPolicy::TickAligned }
    }
}

fn increment_pending(stim: &TimerStimulus, s: TimerState, c: usize) -> bool {
    stim.rst_ni[c] && stim.active[c] && s.tick_count < stim.prescaler[c]
}

/// Builds a stimulus cycle by cycle; `want` proposes (rst_ni, active) for a
/// cycle and the policy may veto the change.
fn drive(
    cycles: usize,
    policy: GuardPolicy,
    prescaler: u64,
    step: u64,
    mtimecmp: [u64; HARTS],
    mut want: impl FnMut(usize, bool, bool) -> (bool, bool),
) -> TimerStimulus {
    let mut stim = TimerStimulus {
        rst_ni: Vec::with_capacity(cycles),
        active: Vec::with_capacity(cycles),
        prescaler: vec![prescaler; cycles],
        step: vec![step; cycles],
        mtimecmp,
    };
    let mut s = TimerState { tick_count: 0, mtime: 0 };
    for c in 0..cycles {
        let (prev_r, prev_a) = if c == 0 { (false, false) } else { (stim.rst_ni[c - 1], stim.active[c - 1]) };
        let (mut r, mut a) = want(c, prev_r, prev_a);
        if c > 0 && policy == GuardPolicy::TickAligned && increment_pending(&stim, s, c - 1) {
            (r, a) = (prev_r, prev_a);
        }
        stim.rst_ni.push(r);
        stim.active.push(a);
        if c > 0 {
            s = timer_next(s, stim.active[c - 1], prescaler, step);
        }
        if !r {
            s = TimerState { tick_count: 0, mtime: 0 };
        }
    }
    stim
}

/// Directed reset/active probes followed by `cfg.random` random ones.
pub fn timer_probes(cfg: &ProbeConfig) -> Vec<Trace> {
    let k = cfg.cycles;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    // reset released after 2 cycles, pulsed again mid-run
    let pulse = k / 2;
    out.push(simulate_timer(&drive(k, cfg.policy, 2, 1, [3, 6], |c, _, _| {
        let r = c >= 2 && !(pulse..pulse + 2).contains(&c);
        (r, r)
    })));
    // active dropped mid-run while reset stays high
    out.push(simulate_timer(&drive(k, cfg.policy, 1, 2, [2, 9], |c, _, _| (c >= 1, c >= 1 && !(pulse..pulse + 3).contains(&c)))));
    // held in reset throughout
    out.push(simulate_timer(&drive(k, cfg.policy, 1, 1, [0, 1], |_, _, _| (false, true))));
    for _ in 0..cfg.random {
        let prescaler = rng.gen_range(0..=3);
        let step = rng.gen_range(1..=3);
        let cmp = [rng.gen_range(0..=8), rng.gen_range(0..=8)];
        let p = cfg.toggle_prob;
        let mut flips = Vec::with_capacity(k);
        for _ in 0..k {
            flips.push((rng.gen_bool(p), rng.gen_bool(p)));
        }
        let stim = drive(k, cfg.policy, prescaler, step, cmp, |c, r, a| {
            if c == 0 {
                return (false, flips[0].1);
            }
            let (fr, fa) = flips[c];
            let r = if r { !fr } else { fr || c == 1 };
            (r, a ^ fa)
        });
        out.push(simulate_timer(&stim));
    }
    out
}

/// Unconstrained random traces over arbitrary signals, values known.
pub fn random_probes(clock: &str, signals: &[(String, u32)], cfg: &ProbeConfig) -> Vec<Trace> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.random.max(1))
        .map(|_| {
            let mut t = Trace::with_cycles(clock, cfg.cycles);
            for (name, width) in signals {
                let width = (*width).clamp(1, 64);
                let mut v: u64 = 0;
                let vals: Vec<u64> = (0..cfg.cycles)
                    .map(|_| {
                        if rng.gen_bool(cfg.toggle_prob.max(0.5)) {
                            v = if width == 1 { v ^ 1 } else { rng.gen_range(0..4u64.min(1 << width.min(63))) };
                        }
                        v
                    })
                    .collect();
                t.insert_known(name, width, &vals);
            }
            t
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_ticks() {
        let t = simulate_timer(&TimerStimulus::steady(8, 1, 2, 3, [4, 100]));
        let tc: Vec<_> = t.get("tick_count").unwrap().values.iter().map(|v| v.unwrap()).collect();
        assert_eq!(tc, [0, 0, 1, 2, 0, 1, 2, 0]);
        let tick: Vec<_> = t.get("tick").unwrap().values.iter().map(|v| v.unwrap()).collect();
        assert_eq!(tick, [0, 0, 0, 1, 0, 0, 1, 0]);
        let mtime: Vec<_> = t.get("mtime").unwrap().values.iter().map(|v| v.unwrap()).collect();
        assert_eq!(mtime, [0, 0, 0, 0, 3, 3, 3, 6]);
        let intr: Vec<_> = t.get("intr").unwrap().values.iter().map(|v| v.unwrap()).collect();
        assert_eq!(intr, [0, 0, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn pause_clears_count_next_cycle() {
        let t = simulate_timer(&TimerStimulus::steady(8, 1, 5, 1, [9, 9]).pause(4, 5));
        let tc: Vec<_> = t.get("tick_count").unwrap().values.iter().map(|v| v.unwrap()).collect();
        assert_eq!(tc, [0, 0, 1, 2, 3, 0, 1, 2]);
    }

    #[test]
    fn probes_are_seeded() {
        let cfg = ProbeConfig::default();
        assert_eq!(timer_probes(&cfg), timer_probes(&cfg));
        let other = timer_probes(&ProbeConfig { seed: 8, ..cfg.clone() });
        assert_ne!(other, timer_probes(&cfg));
        assert_eq!(timer_probes(&cfg).len(), cfg.random + 3);
    }

    #[test]
    fn tick_aligned_holds_guards_while_counting() {
        for t in timer_probes(&ProbeConfig { random: 50, toggle_prob: 0.5, ..ProbeConfig::default() }) {
            let v = |n: &str, c: usize| t.get(n).unwrap().values[c].unwrap();
            for c in 1..t.cycles() {
                let pending = v("rst_ni", c - 1) == 1 && v("active", c - 1) == 1 && v("tick_count", c - 1) < v("prescaler", c - 1);
                if pending {
                    assert_eq!((v("rst_ni", c), v("active", c)), (1, 1));
                }
            }
        }
    }
}
