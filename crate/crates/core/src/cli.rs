// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 assertion failures, 2 usage or input error, 3 backend error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::compare::match_sets;
use crate::orchestrator::backend::{HttpBackend, LlmBackend, ReplayBackend};
use crate::orchestrator::config::{load_config, BackendKind, SessionConfig};
use crate::orchestrator::log::{final_summary, load_log, SessionLog};
use crate::orchestrator::{
    load_inputs, resume_session, run_session, AutoApprove, ConfirmGate, SessionError, Status, TerminalGate,
};
use crate::report::{build_row, iteration_histogram, render_markdown, write_reports};
use crate::sim::{random_probes, timer_probes, ProbeConfig, HARTS};
use crate::sva::{check_semantics, expand_generate, has_errors, load_assertions, print_assertions, AssertionAst};
use crate::trace::{evaluate, ingest_vcd, EvalReport, Trace};
use crate::verilog::{extract_signals_with, Direction, ExtractOptions, RoleHint, SignalDecl, SignalInventory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "svaflow", version, about = "Generate, check and repair SystemVerilog assertions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the signal inventory of an RTL module as JSON.
    Extract {
        rtl: PathBuf,
        #[arg(long)]
        module: Option<String>,
        /// Keep only the module's ports.
        #[arg(long)]
        header_only: bool,
    },
    /// Parse assertions and, with --rtl, check their signal names.
    Lint {
        sva: PathBuf,
        #[arg(long)]
        rtl: Option<PathBuf>,
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate assertions over VCD traces.
    Check(CheckArgs),
    /// Run the generation and repair loop.
    Gen(GenArgs),
    /// Count assertions two sets have in common.
    Compare(CompareArgs),
    /// Write report.md, report.csv and iterations.csv from session logs.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub sva: PathBuf,
    #[arg(required = true)]
    pub vcd: Vec<PathBuf>,
    /// Clock to sample on; defaults to the clock of the first assertion.
    #[arg(long)]
    pub clock: Option<String>,
    /// Parameter values, e.g. `N=2`.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<String>,
    /// Check signal names against this RTL instead of the trace contents.
    #[arg(long)]
    pub rtl: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Also write a JUnit XML summary here.
    #[arg(long)]
    pub junit: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BackendArg {
    Replay,
    Http,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Session TOML; the flags below override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub rtl: Option<PathBuf>,
    #[arg(long = "trace")]
    pub traces: Vec<PathBuf>,
    #[arg(long)]
    pub design: Option<String>,
    #[arg(long)]
    pub clock: Option<String>,
    #[arg(long)]
    pub backend: Option<BackendArg>,
    #[arg(long)]
    pub replay_dir: Option<PathBuf>,
    #[arg(long)]
    pub max_iter: Option<u32>,
    /// Confirm or edit each repair prompt on the terminal.
    #[arg(long)]
    pub interactive: bool,
    /// Continue from the session log already in --out.
    #[arg(long)]
    pub resume: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// Build random probes from this RTL's signals; the built-in timer
    /// model is used otherwise.
    #[arg(long)]
    pub rtl: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 12)]
    pub cycles: usize,
    #[arg(long, default_value_t = 20)]
    pub random: usize,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub left: PathBuf,
    pub right: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<String>,
    #[command(flatten)]
    pub probes: ProbeArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Session logs (JSONL) written by `gen`.
    #[arg(required = true)]
    pub sessions: Vec<PathBuf>,
    /// Comparison set per design, `DESIGN=PATH`.
    #[arg(long)]
    pub alt: Vec<String>,
    /// Known-good assertions per design, `DESIGN=PATH`.
    #[arg(long)]
    pub reference: Vec<String>,
    #[command(flatten)]
    pub probes: ProbeArgs,
    #[arg(long, default_value = "report")]
    pub out: PathBuf,
}

/// A failure that ends the command with `code`.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

fn input(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_INPUT, message: message.into() }
}

type Res<T> = Result<T, CliError>;

/// Output of a successful command: stdout text and exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command,
/// printing to stdout and stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            let _ = std::io::stdout().flush();
            o.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn run(cli: Cli) -> Res<Outcome> {
    match cli.command {
        Command::Extract { rtl, module, header_only } => cmd_extract(&rtl, module, header_only),
        Command::Lint { sva, rtl, module, json } => cmd_lint(&sva, rtl.as_deref(), module, json),
        Command::Check(a) => cmd_check(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::Report(a) => cmd_report(&a),
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn inventory(rtl: &Path, module: Option<String>, header_only: bool) -> Res<SignalInventory> {
    let opts = ExtractOptions { module, header_only, ..ExtractOptions::default() };
    extract_signals_with(&read(rtl)?, &opts).map_err(|e| input(format!("{}: {e}", rtl.display())))
}

fn parse_params(raw: &[String]) -> Res<BTreeMap<String, i64>> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| input(format!("parameter `{kv}` is not NAME=VALUE")))?;
            let v = v.trim().parse().map_err(|_| input(format!("parameter `{kv}` has a non-integer value")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn load_set(path: &Path, tool: &str) -> Res<Vec<AssertionAst>> {
    let text = read(path)?;
    match load_assertions(&text, tool, "") {
        Ok((set, warnings)) => {
            for w in warnings {
                eprintln!("{}: {}", path.display(), w.render(Some(&text)));
            }
            Ok(set.assertions)
        }
        Err(diags) => {
            let mut m = format!("{} does not parse", path.display());
            for d in diags.iter().filter(|d| d.is_error()) {
                write!(m, "\n  {}", d.render(Some(&text))).unwrap();
            }
            Err(input(m))
        }
    }
}

pub fn cmd_extract(rtl: &Path, module: Option<String>, header_only: bool) -> Res<Outcome> {
    let inv = inventory(rtl, module, header_only)?;
    Ok(Outcome { stdout: inv.to_json() + "\n", code: EXIT_OK })
}

pub fn cmd_lint(sva: &Path, rtl: Option<&Path>, module: Option<String>, json: bool) -> Res<Outcome> {
    let text = read(sva)?;
    let (asts, mut diags) = crate::sva::parse_assertions(&text);
    if let Some(rtl) = rtl {
        let inv = inventory(rtl, module, false)?;
        for a in &asts {
            diags.extend(check_semantics(a, &inv));
        }
    }
    let failed = has_errors(&diags);
    let stdout = if json {
        let v = serde_json::json!({
            "assertions": asts.iter().map(|a| &a.name).collect::<Vec<_>>(),
            "diagnostics": diags,
        });
        serde_json::to_string_pretty(&v).unwrap() + "\n"
    } else {
        let mut s = String::new();
        for d in &diags {
            writeln!(s, "{}", d.render(Some(&text))).unwrap();
        }
        writeln!(s, "{} assertions, {} errors", asts.len(), diags.iter().filter(|d| d.is_error()).count()).unwrap();
        s
    };
    if failed && !json {
        eprint!("{stdout}");
        return Err(input(format!("{} has errors", sva.display())));
    }
    Ok(Outcome { stdout, code: if failed { EXIT_INPUT } else { EXIT_OK } })
}

/// Declarations seen in a trace, so that names can be checked without RTL.
/// `x[0]`, `x[1]`... become one array.
pub fn inventory_from_trace(trace: &Trace) -> SignalInventory {
    let mut arrays: BTreeMap<String, (u32, u32)> = BTreeMap::new();
    let mut signals = Vec::new();
    for (name, s) in trace.signals() {
        if let Some((base, idx)) = name.strip_suffix(']').and_then(|n| n.split_once('[')) {
            if let Ok(i) = idx.parse::<u32>() {
                let e = arrays.entry(base.to_string()).or_insert((s.width, 0));
                e.1 = e.1.max(i + 1);
                continue;
            }
        }
        signals.push(decl(name, s.width, None));
    }
    for (base, (width, len)) in arrays {
        signals.push(decl(&base, width, Some(len)));
    }
    if trace.get(&trace.clock).is_none() {
        signals.push(SignalDecl { role_hint: RoleHint::Clock, ..decl(&trace.clock, 1, None) });
    }
    SignalInventory { module_name: "trace".into(), signals, parameters: BTreeMap::new() }
}

fn decl(name: &str, width: u32, array_len: Option<u32>) -> SignalDecl {
    SignalDecl { name: name.into(), direction: Direction::Internal, width, array_len, role_hint: RoleHint::Unknown }
}

#[derive(serde::Serialize)]
struct CheckRow {
    trace: String,
    report: EvalReport,
}

pub fn cmd_check(a: &CheckArgs) -> Res<Outcome> {
    let asts = load_set(&a.sva, "checked")?;
    if asts.is_empty() {
        return Err(input(format!("{} contains no assertions", a.sva.display())));
    }
    let clock = a.clock.clone().unwrap_or_else(|| asts[0].clock.clone());
    let traces = a
        .vcd
        .iter()
        .map(|p| {
            let t = ingest_vcd(&read(p)?, &clock).map_err(|e| input(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), t))
        })
        .collect::<Res<Vec<_>>>()?;
    let mut params = BTreeMap::new();
    let inv = match &a.rtl {
        Some(rtl) => {
            let inv = inventory(rtl, None, false)?;
            params.extend(inv.parameters.clone());
            inv
        }
        None => inventory_from_trace(&traces[0].1),
    };
    params.extend(parse_params(&a.params)?);
    let inv = SignalInventory { parameters: params.clone(), ..inv };

    let mut sorted: Vec<&AssertionAst> = asts.iter().collect();
    sorted.sort_by(|x, y| x.name.cmp(&y.name));
    let mut problems = Vec::new();
    for ast in &sorted {
        problems.extend(check_semantics(ast, &inv).into_iter().filter(|d| d.is_error()).map(|d| d.render(None)));
    }
    if !problems.is_empty() {
        return Err(input(problems.join("\n")));
    }

    let mut rows = Vec::new();
    for ast in sorted {
        let instances = expand_generate(ast, &params).map_err(|e| input(e.to_string()))?;
        for inst in &instances {
            for (name, t) in &traces {
                let report = evaluate(inst, t).map_err(|e| input(e.to_string()))?;
                rows.push(CheckRow { trace: name.clone(), report });
            }
        }
    }
    let failed = rows.iter().any(|r| r.report.fails > 0);
    if let Some(path) = &a.junit {
        std::fs::write(path, junit(&rows)).map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    let stdout = if a.json {
        serde_json::to_string_pretty(&rows).unwrap() + "\n"
    } else {
        let w = rows.iter().map(|r| r.report.assertion_name.len()).max().unwrap_or(9).max(9);
        let mut s = format!("{:w$}  {:>8} {:>6} {:>6} {:>8} {:>8} {:>10}  trace\n", "assertion", "attempts", "pass", "fail", "vacuous", "disabled", "incomplete");
        for r in &rows {
            let e = &r.report;
            writeln!(
                s,
                "{:w$}  {:>8} {:>6} {:>6} {:>8} {:>8} {:>10}  {}",
                e.assertion_name, e.attempts, e.passes, e.fails, e.vacuous, e.disabled, e.incomplete, r.trace
            )
            .unwrap();
        }
        for r in &rows {
            if let Some(m) = &r.report.first_failure_message {
                writeln!(s, "{m} [{}]", r.trace).unwrap();
            }
        }
        s
    };
    Ok(Outcome { stdout, code: if failed { EXIT_FAILURES } else { EXIT_OK } })
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn junit(rows: &[CheckRow]) -> String {
    let failures = rows.iter().filter(|r| r.report.fails > 0).count();
    let mut s = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<testsuite name=\"svaflow\" tests=\"{}\" failures=\"{failures}\">\n",
        rows.len()
    );
    for r in rows {
        let name = xml_escape(&r.report.assertion_name);
        let class = xml_escape(&r.trace);
        match &r.report.first_failure_message {
            Some(m) if r.report.fails > 0 => {
                writeln!(s, "  <testcase classname=\"{class}\" name=\"{name}\">").unwrap();
                writeln!(s, "    <failure message=\"{}\">{} failing attempts</failure>", xml_escape(m), r.report.fails).unwrap();
                s.push_str("  </testcase>\n");
            }
            _ => writeln!(s, "  <testcase classname=\"{class}\" name=\"{name}\"/>").unwrap(),
        }
    }
    s.push_str("</testsuite>\n");
    s
}

fn session_config(a: &GenArgs) -> Res<SessionConfig> {
    let mut cfg = match &a.config {
        Some(p) => load_config(p).map_err(|e| input(e.to_string()))?,
        None => SessionConfig::default(),
    };
    if let Some(v) = &a.spec {
        cfg.spec = Some(v.clone());
    }
    if let Some(v) = &a.rtl {
        cfg.rtl = Some(v.clone());
    }
    if !a.traces.is_empty() {
        cfg.traces = a.traces.clone();
    }
    if let Some(v) = &a.design {
        cfg.design = v.clone();
    }
    if let Some(v) = &a.clock {
        cfg.clock = Some(v.clone());
    }
    if let Some(v) = &a.replay_dir {
        cfg.replay_dir = Some(v.clone());
    }
    if let Some(b) = a.backend {
        cfg.backend = match b {
            BackendArg::Replay => BackendKind::Replay,
            BackendArg::Http => BackendKind::Http,
        };
    }
    if let Some(n) = a.max_iter {
        cfg.max_iterations = n;
    }
    cfg.interactive_confirm |= a.interactive;
    cfg.validate().map_err(|e| input(e.to_string()))?;
    Ok(cfg)
}

fn backend_for(cfg: &SessionConfig) -> Res<Box<dyn LlmBackend>> {
    let unavailable = |e: crate::orchestrator::backend::BackendError| CliError { code: EXIT_BACKEND, message: e.to_string() };
    Ok(match cfg.backend {
        BackendKind::Http => Box::new(HttpBackend::new(cfg.http.clone()).map_err(unavailable)?),
        BackendKind::Replay => {
            let dir = cfg.replay_dir.as_deref().ok_or_else(|| input("replay backend needs a replay directory"))?;
            Box::new(ReplayBackend::open(dir).map_err(unavailable)?)
        }
    })
}

struct Boxed(Box<dyn LlmBackend>);

impl LlmBackend for Boxed {
    fn id(&self) -> &str {
        self.0.id()
    }
    fn query(&mut self, m: &[crate::orchestrator::backend::ChatMessage]) -> Result<String, crate::orchestrator::backend::BackendError> {
        self.0.query(m)
    }
    fn skip(&mut self) {
        self.0.skip()
    }
}

fn session_error(e: SessionError) -> CliError {
    match e {
        SessionError::Backend(b) => CliError { code: EXIT_BACKEND, message: b.to_string() },
        other => input(other.to_string()),
    }
}

pub fn cmd_gen(a: &GenArgs) -> Res<Outcome> {
    let cfg = session_config(a)?;
    // the backend is built first so a missing credential fails before any file is read
    let mut backend = backend_for(&cfg)?;
    let inputs = load_inputs(&cfg).map_err(session_error)?;
    std::fs::create_dir_all(&a.out).map_err(|e| input(format!("{}: {e}", a.out.display())))?;
    let log_path = a.out.join("session.jsonl");

    let stdin = std::io::stdin();
    let mut terminal;
    let mut auto = AutoApprove;
    let gate: &mut dyn ConfirmGate = if cfg.interactive_confirm {
        terminal = TerminalGate::new(stdin.lock(), std::io::stderr());
        &mut terminal
    } else {
        &mut auto
    };

    let session = if a.resume && log_path.exists() {
        let existing = load_log(&log_path).map_err(|e| input(e.to_string()))?;
        let mut log = SessionLog::resume(&log_path, &existing).map_err(|e| input(e.to_string()))?;
        resume_session(&inputs, &cfg, Boxed(backend), &existing, &mut log, gate)
    } else {
        let mut log = SessionLog::create(&log_path).map_err(|e| input(e.to_string()))?;
        run_session(&inputs, &cfg, backend.as_mut(), &mut log, gate)
    }
    .map_err(session_error)?;

    let set = session.passing_set();
    let write = |name: &str, body: String| {
        let p = a.out.join(name);
        std::fs::write(&p, body).map_err(|e| input(format!("{}: {e}", p.display())))
    };
    write("assertions.json", set.to_json() + "\n")?;
    write("assertions.sva", print_assertions(&set.assertions))?;
    let summary = session.summary();
    write("summary.json", serde_json::to_string_pretty(&summary).unwrap() + "\n")?;

    let stdout = if a.json {
        serde_json::to_string_pretty(&summary).unwrap() + "\n"
    } else {
        let mut s = String::new();
        for x in &summary.assertions {
            writeln!(s, "{:24} {:22} {}", x.name, x.status.as_str(), x.iterations_used).unwrap();
        }
        writeln!(s, "{} of {} passing, log {}", set.assertions.len(), summary.assertions.len(), log_path.display()).unwrap();
        s
    };
    let all_pass = summary.assertions.iter().all(|x| x.status == Status::Passing);
    Ok(Outcome { stdout, code: if all_pass { EXIT_OK } else { EXIT_FAILURES } })
}

fn probe_config(p: &ProbeArgs) -> ProbeConfig {
    ProbeConfig { cycles: p.cycles, random: p.random, seed: p.seed, ..ProbeConfig::default() }
}

/// Probe traces plus the parameters they imply.
fn probes(p: &ProbeArgs) -> Res<(Vec<Trace>, BTreeMap<String, i64>)> {
    let cfg = probe_config(p);
    match &p.rtl {
        None => Ok((timer_probes(&cfg), BTreeMap::from([("N".to_string(), HARTS as i64)]))),
        Some(rtl) => {
            let inv = inventory(rtl, None, false)?;
            let clock = inv
                .signals
                .iter()
                .find(|s| s.role_hint == RoleHint::Clock)
                .map(|s| s.name.clone())
                .ok_or_else(|| input(format!("{}: no clock-role signal", rtl.display())))?;
            let mut sigs = Vec::new();
            for s in inv.signals.iter().filter(|s| s.name != clock) {
                match s.array_len {
                    Some(n) => sigs.extend((0..n).map(|i| (format!("{}[{i}]", s.name), s.width))),
                    None => sigs.push((s.name.clone(), s.width)),
                }
            }
            Ok((random_probes(&clock, &sigs, &cfg), inv.parameters.clone()))
        }
    }
}

pub fn cmd_compare(a: &CompareArgs) -> Res<Outcome> {
    let left = load_set(&a.left, "left")?;
    let right = load_set(&a.right, "right")?;
    let (traces, mut params) = probes(&a.probes)?;
    params.extend(parse_params(&a.params)?);
    let m = match_sets(&left, &right, &traces, &params).with_seed(a.probes.seed);
    for e in &m.excluded {
        eprintln!("warning: excluded {e}");
    }
    let stdout = if a.json { m.to_json() + "\n" } else { m.render_table() };
    Ok(Outcome { stdout, code: EXIT_OK })
}

fn per_design(raw: &[String]) -> Res<BTreeMap<String, PathBuf>> {
    raw.iter()
        .map(|kv| {
            let (d, p) = kv.split_once('=').ok_or_else(|| input(format!("`{kv}` is not DESIGN=PATH")))?;
            Ok((d.to_string(), PathBuf::from(p)))
        })
        .collect()
}

pub fn cmd_report(a: &ReportArgs) -> Res<Outcome> {
    let alts = per_design(&a.alt)?;
    let refs = per_design(&a.reference)?;
    let (traces, _) = probes(&a.probes)?;
    let mut rows = Vec::new();
    let mut sessions = Vec::new();
    for path in &a.sessions {
        let records = load_log(path).map_err(|e| input(e.to_string()))?;
        let summary = final_summary(&records)
            .cloned()
            .ok_or_else(|| input(format!("{}: session did not complete", path.display())))?;
        let backend = records.iter().find_map(|r| match &r.event {
            crate::orchestrator::log::LogEvent::SessionStart { backend, .. } => Some(backend.clone()),
            _ => None,
        });
        let alt = alts.get(&summary.design).map(|p| load_set(p, "alt")).transpose()?;
        let reference = refs.get(&summary.design).map(|p| load_set(p, "reference")).transpose()?.unwrap_or_default();
        let (row, _) =
            build_row(&summary, &reference, alt.as_deref(), &traces).map_err(|e| input(e.to_string()))?;
        rows.push(row);
        let source = if backend.as_deref() == Some("replay") { "replay-fixture" } else { "live" };
        sessions.push((summary, source.to_string()));
    }
    let iterations = iteration_histogram(&sessions);
    write_reports(&a.out, &rows, &iterations).map_err(|e| input(e.to_string()))?;
    Ok(Outcome { stdout: render_markdown(&rows), code: EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        let p = parse_params(&["N=2".into(), " M = -3".into()]).unwrap();
        assert_eq!(p["N"], 2);
        assert_eq!(p["M"], -3);
        assert_eq!(parse_params(&["N".into()]).unwrap_err().code, EXIT_INPUT);
    }

    #[test]
    fn trace_inventory_groups_elements() {
        let mut t = Trace::with_cycles("clk", 2);
        t.insert_known("cmp[0]", 8, &[0, 0]);
        t.insert_known("cmp[1]", 8, &[0, 0]);
        t.insert_known("a", 1, &[0, 1]);
        let inv = inventory_from_trace(&t);
        assert_eq!(inv.get("cmp").unwrap().array_len, Some(2));
        assert!(inv.contains("a") && inv.contains("clk"));
    }

    #[test]
    fn junit_escapes() {
        let mut r = EvalReport::new("a<b");
        r.fails = 1;
        r.first_failure_message = Some("x & y".into());
        let x = junit(&[CheckRow { trace: "t".into(), report: r }]);
        assert!(x.contains("a&lt;b") && x.contains("x &amp; y") && x.contains("failures=\"1\""));
    }
}
