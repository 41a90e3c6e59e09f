//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 quality gate failed, 3 bad usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::analyze_with_config;
use crate::config::Config;
use crate::coverage::load_coverage;
use crate::debt::format_effort;
use crate::monitor::{
    evaluate_gate, load_gate_config, render_trend, trend_series, GateResult, GateStatus, HistoryStore, PlotFormat,
};
use crate::report::{render_report, ReportFormat};
use crate::rules::RuleSet;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_GATE_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "debtscope", version, about = "Identify, price and monitor technical debt in a source tree")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Project config (analyze, report, rules) or gate config (gate).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// text | csv | html | json for reports; csv | svg for trends.
    #[arg(long, global = true, value_name = "FORMAT")]
    format: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Coverage report (LCOV or native) to include in the analysis.
    #[arg(long, global = true, value_name = "FILE")]
    coverage: Option<PathBuf>,
    /// Gate config to evaluate after analysis; a failing gate exits with 2.
    #[arg(long, global = true, value_name = "FILE")]
    gate: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a project, record a snapshot and print the report.
    Analyze {
        #[arg(default_value = ".")]
        root: PathBuf,
        /// Extra exclude glob (repeatable); added to the configured ones.
        #[arg(long, value_name = "GLOB")]
        exclude: Vec<String>,
        /// Only scan these extensions (repeatable); replaces the configured list.
        #[arg(long = "include-ext", value_name = "EXT")]
        include_ext: Vec<String>,
        #[arg(long, value_name = "BYTES")]
        max_file_bytes: Option<u64>,
        /// Do not append the snapshot to the history store.
        #[arg(long)]
        no_record: bool,
    },
    /// Render a recorded run.
    Report {
        #[arg(default_value = ".")]
        root: PathBuf,
        /// Run id; the latest run when omitted.
        #[arg(long, value_name = "N")]
        run: Option<u64>,
    },
    /// Plot one metric over the recorded runs.
    Trend {
        #[arg(default_value = ".")]
        root: PathBuf,
        #[arg(long, value_name = "KEY")]
        metric: String,
        #[arg(long, value_name = "N")]
        from_run: Option<u64>,
        #[arg(long, value_name = "N")]
        to_run: Option<u64>,
    },
    /// Evaluate the gate given by --config against a recorded run.
    Gate {
        #[arg(default_value = ".")]
        root: PathBuf,
        #[arg(long, value_name = "N")]
        run: Option<u64>,
    },
    /// Show the rule catalog.
    Rules {
        #[arg(long, conflicts_with = "explain", required_unless_present = "explain")]
        list: bool,
        #[arg(long, value_name = "ID")]
        explain: Option<String>,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RootNotFound(_)
            | Error::Config(_)
            | Error::Rules(_)
            | Error::Coverage { .. }
            | Error::UnknownRun { .. }
            | Error::UnknownMetric { .. } => EXIT_USAGE,
            Error::Io { .. } | Error::StoreLocked(_) | Error::CorruptRecord { .. } | Error::Invalid(_) => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INTERNAL, message: message.into() }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { root, exclude, include_ext, max_file_bytes, no_record } => {
            let mut config = Config::load(root, g.config.as_deref())?;
            config.scan.exclude.extend(exclude.iter().cloned());
            if !include_ext.is_empty() {
                config.scan.include_extensions = include_ext.clone();
            }
            if let Some(n) = max_file_bytes {
                config.scan.max_file_bytes = *n;
            }
            analyze(root, &config, g, *no_record, stdout, stderr)
        }
        Command::Report { root, run } => {
            let format = report_format(g)?;
            let store = HistoryStore::for_project(root);
            let snapshot = select_run(&store, *run)?;
            emit(g.out.as_deref(), &render_report(&snapshot, format)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Trend { root, metric, from_run, to_run } => {
            let format = match g.format.as_deref() {
                Some("csv") => PlotFormat::Csv,
                Some("svg") => PlotFormat::Svg,
                Some(other) => return Err(usage(format!("unknown trend format `{other}` (expected csv or svg)"))),
                None if g.out.as_deref().is_some_and(|p| p.extension().is_some_and(|e| e == "svg")) => PlotFormat::Svg,
                None => PlotFormat::Csv,
            };
            let runs =
                (from_run.is_some() || to_run.is_some()).then(|| from_run.unwrap_or(0)..=to_run.unwrap_or(u64::MAX));
            let snapshots = HistoryStore::for_project(root).snapshots()?;
            let series = trend_series(&snapshots, metric, runs)?;
            emit(g.out.as_deref(), &render_trend(&series, metric, format)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Gate { root, run } => {
            let path = g.config.as_deref().ok_or_else(|| usage("gate needs --config <FILE> naming a gate config"))?;
            let gate = read_gate(path)?;
            let snapshot = select_run(&HistoryStore::for_project(root), *run)?;
            let result = evaluate_gate(&snapshot, &gate)?;
            write_gate(&result, stdout).map_err(|e| internal(e.to_string()))?;
            Ok(gate_exit(&result))
        }
        Command::Rules { explain, .. } => {
            let rules = match &g.config {
                Some(path) => Config::load(Path::new("."), Some(path))?.rule_set()?,
                None => RuleSet::builtin(),
            };
            let text = match explain {
                Some(id) => {
                    let rule = rules.get(id).ok_or_else(|| {
                        let ids: Vec<&str> = rules.rules().iter().map(|r| r.id.as_str()).collect();
                        usage(format!("unknown rule id `{id}`; known ids: {}", ids.join(", ")))
                    })?;
                    explain_rule(rule)
                }
                None => list_rules(&rules),
            };
            emit(g.out.as_deref(), &text, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

fn report_format(g: &Global) -> std::result::Result<ReportFormat, Failure> {
    match g.format.as_deref() {
        None => Ok(ReportFormat::Text),
        Some(f) => ReportFormat::parse(f)
            .ok_or_else(|| usage(format!("unknown report format `{f}` (expected text, csv, html or json)"))),
    }
}

fn read_gate(path: &Path) -> std::result::Result<crate::monitor::GateConfig, Failure> {
    if !path.is_file() {
        return Err(usage(format!("gate config {} not found", path.display())));
    }
    Ok(load_gate_config(path)?)
}

fn select_run(store: &HistoryStore, run: Option<u64>) -> std::result::Result<crate::monitor::Snapshot, Failure> {
    match run {
        Some(n) => Ok(store.get(n)?),
        None => store.latest()?.ok_or_else(|| {
            usage(format!("no runs recorded in {}; run `debtscope analyze` first", store.dir().display()))
        }),
    }
}

fn analyze(
    root: &Path,
    config: &Config,
    g: &Global,
    no_record: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Outcome {
    let format = report_format(g)?;
    let gate = g.gate.as_deref().map(read_gate).transpose()?;
    let coverage = match g.coverage.as_deref() {
        Some(p) if !p.is_file() => return Err(usage(format!("coverage report {} not found", p.display()))),
        Some(p) => Some(load_coverage(p)?),
        None => None,
    };
    let analysis = analyze_with_config(root, config, coverage.as_ref())?;
    for w in &analysis.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let mut snapshot = analysis.snapshot;
    if !no_record {
        snapshot.run_id = HistoryStore::for_project(root).record(&snapshot)?;
    }
    emit(g.out.as_deref(), &render_report(&snapshot, format)?, stdout)?;

    match gate {
        Some(gate) => {
            let result = evaluate_gate(&snapshot, &gate)?;
            write_gate(&result, stderr).map_err(|e| internal(e.to_string()))?;
            Ok(gate_exit(&result))
        }
        None => Ok(EXIT_OK),
    }
}

fn gate_exit(result: &GateResult) -> i32 {
    if result.status == GateStatus::Fail {
        EXIT_GATE_FAILED
    } else {
        EXIT_OK
    }
}

fn write_gate(result: &GateResult, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "quality gate: {}", result.status.as_str())?;
    for v in &result.verdicts {
        let actual = v.actual.map_or_else(|| "n/a".to_string(), |a| a.to_string());
        let verdict = if v.breached { "BREACHED" } else { "ok" };
        let level = match v.condition.level {
            crate::monitor::GateLevel::Warn => "warn",
            crate::monitor::GateLevel::Fail => "fail",
        };
        writeln!(w, "  [{level}] {} (actual {actual}): {verdict}", v.condition)?;
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::from(Error::io(path, e))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| internal(e.to_string())),
    }
}

fn list_rules(rules: &RuleSet) -> String {
    let width = rules.rules().iter().map(|r| r.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rules.rules() {
        out.push_str(&format!(
            "{:<width$}  {:<16}  {:<8}  {:>6}  {}\n",
            r.id,
            r.category.label(),
            r.severity.as_str(),
            format_effort(u64::from(r.remediation_minutes)),
            r.title
        ));
    }
    out
}

fn explain_rule(r: &crate::rules::Rule) -> String {
    let languages: Vec<&str> = r.languages.iter().map(|l| l.as_str()).collect();
    format!(
        "{id}: {title}\n\
         category:     {category}\n\
         severity:     {severity}\n\
         dimension:    {dimension}\n\
         remediation:  {effort}\n\
         languages:    {languages}\n\
         matches:      {matcher}\n\
         propagation:  {propagation}\n\
         suggestion:   {suggestion}\n\
         source:       {source}\n",
        id = r.id,
        title = r.title,
        category = r.category.label(),
        severity = r.severity.as_str(),
        dimension = r.dimension.label(),
        effort = format_effort(u64::from(r.remediation_minutes)),
        languages = languages.join(", "),
        matcher = r.matcher.describe(),
        propagation = r.propagation,
        suggestion = r.suggestion,
        source = if r.builtin { "builtin" } else { "manifest" },
    )
}
