use std::fs;
use std::path::{Path, PathBuf};

use debtscope::debt::Rating;
use debtscope::monitor::Snapshot;
use debtscope::rules::{Category, Severity};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["debtscope"];
    argv.extend_from_slice(args);
    let code = debtscope::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Copy a fixture tree so the run history lands in a scratch directory.
fn scratch_copy(fixture: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let from = fixtures().join(fixture);
    for entry in walkdir::WalkDir::new(&from) {
        let entry = entry.unwrap();
        let target = dir.path().join(entry.path().strip_prefix(&from).unwrap());
        if entry.file_type().is_dir() {
            fs::create_dir_all(&target).unwrap();
        } else {
            fs::copy(entry.path(), &target).unwrap();
        }
    }
    dir
}

fn write_gate(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("gate.toml");
    fs::write(&path, body).unwrap();
    path
}

const NO_BLOCKERS: &str = "[[condition]]\nmetric = \"blocker_issues\"\nop = \"<=\"\nbound = 0\n";

#[test]
fn rules_list_shows_every_builtin() {
    let (code, out, _) = cli(&["rules", "--list"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 9);
    assert!(out.contains("hardcoded-credentials"));
}

#[test]
fn rules_explain_prints_title_and_suggestion() {
    let (code, out, _) = cli(&["rules", "--explain", "empty-method"]);
    assert_eq!(code, 0);
    assert!(out.contains("Methods should not be empty"));
    assert!(out.contains("suggestion:"));
    assert!(out.contains("UnsupportedOperationException"));
}

#[test]
fn unknown_rule_is_a_usage_error_listing_ids() {
    let (code, _, err) = cli(&["rules", "--explain", "no-such-rule"]);
    assert_eq!(code, 3);
    assert!(err.contains("empty-method"));
}

#[test]
fn rules_needs_list_or_explain() {
    assert_eq!(cli(&["rules"]).0, 3);
    assert_eq!(cli(&["rules", "--list", "--explain", "empty-method"]).0, 3);
}

#[test]
fn bad_flags_and_formats_are_usage_errors() {
    assert_eq!(cli(&["analyze", "--frobnicate"]).0, 3);
    assert_eq!(cli(&["nonsense"]).0, 3);
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_str().unwrap();
    assert_eq!(cli(&["analyze", root, "--format", "pdf"]).0, 3);
    assert_eq!(cli(&["analyze", root, "--coverage", "/nonexistent/lcov.info"]).0, 3);
    assert_eq!(cli(&["analyze", "/nonexistent/project/root"]).0, 3);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_debtscope");
    let status = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap();
    let out = status(&["rules", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stdout.is_empty());
    assert_eq!(status(&["rules", "--explain", "nope"]).status.code(), Some(3));

    let project = scratch_copy("gate");
    let gate = write_gate(project.path(), NO_BLOCKERS);
    let out = status(&["analyze", project.path().to_str().unwrap(), "--gate", gate.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(cli(&["--help"]).0, 0);
    assert_eq!(cli(&["--version"]).0, 0);
}

#[test]
fn empty_project_has_no_debt() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = cli(&["analyze", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let s: Snapshot = serde_json::from_str(&out).unwrap();
    assert_eq!(s.run_id, 1);
    assert_eq!(s.counts.total(), 0);
    assert!(s.items.is_empty());
    assert_eq!(s.principal.total.hours, 0.0);
    assert_eq!(
        (s.ratings.reliability, s.ratings.security, s.ratings.maintainability),
        (Rating::A, Rating::A, Rating::A)
    );
}

#[test]
fn no_record_leaves_no_history() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = cli(&["analyze", dir.path().to_str().unwrap(), "--no-record"]);
    assert_eq!(code, 0);
    assert!(!dir.path().join(".debtscope/history.log").exists());
}

#[test]
fn gate_needs_a_config_file() {
    let project = scratch_copy("gate");
    let root = project.path().to_str().unwrap();
    assert_eq!(cli(&["analyze", root]).0, 0);
    assert_eq!(cli(&["gate", root]).0, 3);
    assert_eq!(cli(&["gate", root, "--config", "/nonexistent/gate.toml"]).0, 3);
}

#[test]
fn gate_exit_codes_follow_the_verdict() {
    let project = scratch_copy("gate");
    let root = project.path().to_str().unwrap();
    assert_eq!(cli(&["analyze", root]).0, 0);

    let failing = write_gate(project.path(), NO_BLOCKERS);
    let (code, out, _) = cli(&["gate", root, "--config", failing.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("quality gate: fail"));
    assert!(out.contains("actual 4"));

    let passing = write_gate(project.path(), "[[condition]]\nmetric = \"blocker_issues\"\nop = \"<=\"\nbound = 4\n");
    assert_eq!(cli(&["gate", root, "--config", passing.to_str().unwrap()]).0, 0);

    let warning = write_gate(project.path(), &format!("{NO_BLOCKERS}level = \"warn\"\n"));
    let (code, out, _) = cli(&["gate", root, "--config", warning.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("quality gate: warn"));
}

#[test]
fn gate_with_unknown_metric_is_a_usage_error() {
    let project = scratch_copy("gate");
    let root = project.path().to_str().unwrap();
    assert_eq!(cli(&["analyze", root]).0, 0);
    let gate = write_gate(project.path(), "[[condition]]\nmetric = \"bogus\"\nop = \"<=\"\nbound = 0\n");
    assert_eq!(cli(&["gate", root, "--config", gate.to_str().unwrap()]).0, 3);
}

#[test]
fn analyze_with_failing_gate_exits_two_but_still_records() {
    let project = scratch_copy("gate");
    let root = project.path().to_str().unwrap();
    let gate = write_gate(project.path(), NO_BLOCKERS);
    let (code, out, err) = cli(&["analyze", root, "--gate", gate.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("debtscope report: run 1"));
    assert!(err.contains("BREACHED"));
    assert_eq!(cli(&["report", root, "--run", "1"]).0, 0);
}

#[test]
fn report_selects_runs() {
    let project = scratch_copy("gate");
    let root = project.path().to_str().unwrap();
    assert_eq!(cli(&["report", root]).0, 3, "no runs recorded yet");
    cli(&["analyze", root]);
    cli(&["analyze", root]);
    let (code, out, _) = cli(&["report", root]);
    assert_eq!(code, 0);
    assert!(out.contains("run 2 at"));
    let (code, _, err) = cli(&["report", root, "--run", "7"]);
    assert_eq!(code, 3);
    assert!(err.contains("1, 2"), "{err}");
}

#[test]
fn csv_report_has_the_item_columns() {
    let project = scratch_copy("gate");
    let root = project.path().to_str().unwrap();
    let (code, out, _) = cli(&["analyze", root, "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(!out.contains('\r'));
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "ID",
            "Name",
            "Location",
            "Responsible",
            "Dimension",
            "Date/Time",
            "Context",
            "Propagation rule",
            "Intentionality",
            "Remediation"
        ]
    );
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == 10));
}

#[test]
fn html_report_escapes_and_is_self_contained() {
    let project = scratch_copy("gate");
    let (code, out, _) = cli(&["analyze", project.path().to_str().unwrap(), "--format", "html"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<!DOCTYPE html>"));
    assert!(!out.contains("<script"));
    assert!(!out.contains("<link"));
}

#[test]
fn out_flag_writes_a_file() {
    let project = scratch_copy("gate");
    let target = project.path().join("report.json");
    let (code, out, _) =
        cli(&["analyze", project.path().to_str().unwrap(), "--format", "json", "--out", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let s: Snapshot = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(s.counts.get(Category::Vulnerability, Severity::Blocker), 4);
}

#[test]
fn trend_csv_and_svg() {
    let project = scratch_copy("gate");
    let root = project.path().to_str().unwrap();
    cli(&["analyze", root]);
    cli(&["analyze", root]);
    let (code, out, _) = cli(&["trend", root, "--metric", "blocker_issues"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "timestamp,value");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with(",4"));

    let svg = project.path().join("plot.svg");
    assert_eq!(cli(&["trend", root, "--metric", "td_ratio", "--out", svg.to_str().unwrap()]).0, 0);
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));

    assert_eq!(cli(&["trend", root, "--metric", "nonsense"]).0, 3);
    assert_eq!(cli(&["trend", root, "--metric", "loc", "--format", "png"]).0, 3);
}

#[test]
fn corrupted_history_is_an_internal_error() {
    let project = scratch_copy("gate");
    let root = project.path().to_str().unwrap();
    cli(&["analyze", root]);
    let log = project.path().join(".debtscope/history.log");
    let mut bytes = fs::read(&log).unwrap();
    bytes.extend_from_slice(b"{\"schema_version\": 1, \"run_id\"");
    fs::write(&log, bytes).unwrap();
    let (code, _, err) = cli(&["analyze", root]);
    assert_eq!(code, 1);
    assert!(err.contains("byte offset"), "{err}");
}

// Hand-derived expectations for the demo project live in demo.expected.toml.

#[derive(serde::Deserialize)]
struct Expected {
    summary: ExpectedSummary,
    counts: std::collections::BTreeMap<String, [u64; 5]>,
    measures: ExpectedMeasures,
    principal: std::collections::BTreeMap<String, f64>,
    items: ExpectedItems,
}

#[derive(serde::Deserialize)]
struct ExpectedSummary {
    files: u64,
    lines: u64,
    loc: u64,
    comment_lines: u64,
    blank_lines: u64,
    statements: u64,
    functions: u64,
    classes: u64,
    packages: u64,
    package_edges: u64,
}

#[derive(serde::Deserialize)]
struct ExpectedMeasures {
    duplicated_blocks: u64,
    duplicated_lines: u64,
    duplication_density: f64,
    coverage_percent: f64,
    remediation_minutes: u64,
    ratio_minutes: u64,
    td_ratio: f64,
    reliability: String,
    security: String,
    maintainability: String,
}

#[derive(serde::Deserialize)]
struct ExpectedItems {
    rows: Vec<(String, u32, String, u64)>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}

#[test]
fn demo_project_matches_hand_derived_expectations() {
    let expected: Expected =
        toml::from_str(&fs::read_to_string(fixtures().join("demo.expected.toml")).unwrap()).unwrap();
    let project = scratch_copy("demo");
    let lcov = fixtures().join("demo.lcov");
    let (code, out, err) =
        cli(&["analyze", project.path().to_str().unwrap(), "--coverage", lcov.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let s: Snapshot = serde_json::from_str(&out).unwrap();

    let t = &s.project.totals;
    let e = &expected.summary;
    assert_eq!(t.files, e.files);
    assert_eq!(t.lines.total_lines, e.lines);
    assert_eq!(t.lines.code_lines, e.loc);
    assert_eq!(s.loc, e.loc);
    assert_eq!(t.lines.comment_lines, e.comment_lines);
    assert_eq!(t.lines.blank_lines, e.blank_lines);
    assert_eq!(t.statements, e.statements);
    assert_eq!(t.functions, e.functions);
    assert_eq!(t.classes, e.classes);
    assert_eq!(s.project.packages, e.packages);
    assert_eq!(s.project.package_edges, e.package_edges);

    let order = [Severity::Blocker, Severity::Critical, Severity::Major, Severity::Minor, Severity::Info];
    for category in Category::ALL {
        let want = expected.counts[&category.to_string().replace(' ', "_")];
        let got: Vec<u64> = order.iter().map(|&sev| s.counts.get(category, sev)).collect();
        assert_eq!(got, want, "{category}");
    }

    let m = &expected.measures;
    assert_eq!(s.duplication.duplicated_blocks, m.duplicated_blocks);
    assert_eq!(s.duplication.duplicated_lines, m.duplicated_lines);
    assert!(close(s.duplication.density, m.duplication_density));
    assert!(close(s.coverage_percent.unwrap(), m.coverage_percent));
    assert_eq!(s.efforts.total_minutes, m.remediation_minutes);
    assert_eq!(s.ratio_minutes, m.ratio_minutes);
    assert!(close(s.td_ratio, m.td_ratio), "td_ratio {}", s.td_ratio);
    assert_eq!(s.ratings.reliability.to_string(), m.reliability);
    assert_eq!(s.ratings.security.to_string(), m.security);
    assert_eq!(s.ratings.maintainability.to_string(), m.maintainability);

    for (name, amount) in s.principal.components() {
        assert!(close(amount.hours, expected.principal[name]), "{name}: {}", amount.hours);
        assert!(close(amount.currency, amount.hours * 50.0));
    }
    assert!(close(s.principal.total.hours, expected.principal["total"]));

    let got: Vec<(String, u32, String, u64)> = s
        .items
        .iter()
        .map(|i| (i.location.file.clone(), i.location.line, i.source.clone(), i.remediation_minutes))
        .collect();
    assert_eq!(got, expected.items.rows);
}
