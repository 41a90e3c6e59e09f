//! Report rendering. Every format is produced from the same table model built
//! from a snapshot, so text, CSV and HTML always agree on the numbers.

use std::fmt::Write as _;

use chrono::SecondsFormat;

use crate::debt::{format_effort, ItemKind, TdItem};
use crate::monitor::Snapshot;
use crate::rules::{Category, Dimension, Severity};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Html,
    Json,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "text" => ReportFormat::Text,
            "csv" => ReportFormat::Csv,
            "html" => ReportFormat::Html,
            "json" => ReportFormat::Json,
            _ => return None,
        })
    }
}

/// Column headings of the TD item table: the nine item fields plus effort.
pub const ITEM_COLUMNS: [&str; 10] = [
    "ID",
    "Name",
    "Location",
    "Responsible",
    "Dimension",
    "Date/Time",
    "Context",
    "Propagation rule",
    "Intentionality",
    "Remediation",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn table(title: &str, headers: &[&str], rows: Vec<Vec<String>>) -> Table {
    Table { title: title.to_string(), headers: headers.iter().map(|h| h.to_string()).collect(), rows }
}

fn percent(v: f64) -> String {
    format!("{v:.2}%")
}

fn hours(v: f64) -> String {
    format!("{v:.2}")
}

pub fn heading(s: &Snapshot) -> String {
    format!("debtscope report: run {} at {}", s.run_id, s.timestamp.to_rfc3339_opts(SecondsFormat::Secs, true))
}

fn item_row(item: &TdItem) -> Vec<String> {
    vec![
        item.id.clone(),
        item.name().to_string(),
        item.location.to_string(),
        item.responsible.clone(),
        item.dimension.label().to_string(),
        item.datetime.to_rfc3339_opts(SecondsFormat::Secs, true),
        item.context.clone(),
        item.propagation_rule.clone(),
        item.intentionality.label().to_string(),
        format_effort(item.remediation_minutes),
    ]
}

pub fn item_table(s: &Snapshot) -> Table {
    table("TD items", &ITEM_COLUMNS, s.items.iter().map(item_row).collect())
}

/// All report sections in display order.
pub fn tables(s: &Snapshot) -> Vec<Table> {
    let mut out = Vec::new();

    let size_row = |name: &str, l: &crate::analysis::LanguageSummary| {
        vec![
            name.to_string(),
            l.files.to_string(),
            l.lines.total_lines.to_string(),
            l.lines.code_lines.to_string(),
            l.lines.comment_lines.to_string(),
            l.lines.blank_lines.to_string(),
            l.statements.to_string(),
            l.functions.to_string(),
            l.classes.to_string(),
        ]
    };
    let mut rows: Vec<Vec<String>> =
        s.project.per_language.iter().map(|(lang, l)| size_row(lang.as_str(), l)).collect();
    rows.push(size_row("total", &s.project.totals));
    out.push(table(
        "Project overview",
        &["Language", "Files", "Lines", "LOC", "Comment lines", "Blank lines", "Statements", "Functions", "Classes"],
        rows,
    ));

    let severities = [Severity::Blocker, Severity::Critical, Severity::Major, Severity::Minor, Severity::Info];
    let mut rows = Vec::new();
    for c in Category::ALL {
        let mut row = vec![c.label().to_string()];
        row.extend(severities.iter().map(|&sev| s.counts.get(c, sev).to_string()));
        row.push(s.counts.category_total(c).to_string());
        rows.push(row);
    }
    let mut total = vec!["Total".to_string()];
    total.extend(severities.iter().map(|&sev| s.counts.severity_total(sev).to_string()));
    total.push(s.counts.total().to_string());
    rows.push(total);
    out.push(table("Issues", &["Category", "Blocker", "Critical", "Major", "Minor", "Info", "Total"], rows));

    let measure = |k: &str, v: String| vec![k.to_string(), v];
    out.push(table(
        "Measures",
        &["Measure", "Value"],
        vec![
            measure("Duplicated blocks", s.duplication.duplicated_blocks.to_string()),
            measure("Duplicated lines", s.duplication.duplicated_lines.to_string()),
            measure("Duplication density", percent(s.duplication.density)),
            measure("Line coverage", s.coverage_percent.map_or_else(|| "n/a".to_string(), percent)),
            measure("Packages", s.project.packages.to_string()),
            measure("Package dependency edges", s.project.package_edges.to_string()),
            measure("TD ratio", percent(s.td_ratio)),
            measure("Reliability rating", s.ratings.reliability.to_string()),
            measure("Security rating", s.ratings.security.to_string()),
            measure("Maintainability rating", s.ratings.maintainability.to_string()),
        ],
    ));

    let effort = |name: &str, minutes: u64| vec![name.to_string(), format_effort(minutes), minutes.to_string()];
    let mut rows: Vec<Vec<String>> =
        ItemKind::ALL.iter().map(|k| effort(k.label(), s.efforts.per_kind.get(k).copied().unwrap_or(0))).collect();
    rows.extend(Dimension::ALL.iter().map(|d| effort(d.label(), s.efforts.per_dimension.get(d).copied().unwrap_or(0))));
    rows.push(effort("Total", s.efforts.total_minutes));
    out.push(table("Remediation effort", &["Item", "Effort", "Minutes"], rows));

    let mut rows: Vec<Vec<String>> = s
        .principal
        .components()
        .iter()
        .map(|(name, a)| vec![name.to_string(), hours(a.hours), hours(a.currency)])
        .collect();
    rows.extend(
        s.principal.per_dimension.iter().map(|(d, a)| vec![d.label().to_string(), hours(a.hours), hours(a.currency)]),
    );
    rows.push(vec!["total".to_string(), hours(s.principal.total.hours), hours(s.principal.total.currency)]);
    out.push(table("TD principal", &["Component", "Hours", "Cost"], rows));

    out.push(item_table(s));
    out
}

fn render_text(s: &Snapshot) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", heading(s));
    for t in tables(s) {
        let _ = writeln!(out, "\n{}", t.title);
        if t.rows.is_empty() {
            out.push_str("  (none)\n");
            continue;
        }
        let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
        for row in &t.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> =
                cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            format!("  {}\n", parts.join("  ").trim_end())
        };
        out.push_str(&line(&t.headers));
        for row in &t.rows {
            out.push_str(&line(row));
        }
    }
    out
}

fn render_csv(s: &Snapshot) -> Result<String> {
    let t = item_table(s);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Invalid(format!("write csv: {e}"));
    w.write_record(&t.headers).map_err(fail)?;
    for row in &t.rows {
        w.write_record(row).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("write csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const CELL: &str = "border:1px solid #ccc;padding:3px 8px;text-align:left;vertical-align:top";

fn render_html(s: &Snapshot) -> String {
    let mut out = String::new();
    let title = escape(&heading(s));
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    let _ = writeln!(out, "<title>{title}</title>\n</head>");
    out.push_str("<body style=\"font-family:sans-serif;font-size:14px;margin:24px;color:#222\">\n");
    let _ = writeln!(out, "<h1 style=\"font-size:20px\">{title}</h1>");
    for t in tables(s) {
        let _ = writeln!(out, "<h2 style=\"font-size:16px;margin-top:24px\">{}</h2>", escape(&t.title));
        out.push_str("<table style=\"border-collapse:collapse\">\n<tr>");
        for h in &t.headers {
            let _ = write!(out, "<th style=\"{CELL};background:#eee\">{}</th>", escape(h));
        }
        out.push_str("</tr>\n");
        for row in &t.rows {
            out.push_str("<tr>");
            for c in row {
                let _ = write!(out, "<td style=\"{CELL}\">{}</td>", escape(c));
            }
            out.push_str("</tr>\n");
        }
        out.push_str("</table>\n");
    }
    out.push_str("</body>\n</html>\n");
    out
}

pub fn render_report(s: &Snapshot, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Text => Ok(render_text(s)),
        ReportFormat::Csv => render_csv(s),
        ReportFormat::Html => Ok(render_html(s)),
        ReportFormat::Json => {
            let mut text =
                serde_json::to_string_pretty(s).map_err(|e| Error::Invalid(format!("serialize snapshot: {e}")))?;
            text.push('\n');
            Ok(text)
        }
    }
}
