//! Metric series over the run history and their CSV / SVG plots.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::{is_metric_key, unknown_metric, Snapshot};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub run_id: u64,
    pub timestamp: DateTime<Utc>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotFormat {
    Csv,
    Svg,
}

/// Points in run order, optionally restricted to a run-id range. Runs that
/// lack the metric (coverage without a report) contribute no point.
pub fn trend_series(snapshots: &[Snapshot], key: &str, runs: Option<RangeInclusive<u64>>) -> Result<Vec<TrendPoint>> {
    if !is_metric_key(key) {
        return Err(unknown_metric(key));
    }
    let mut points = Vec::new();
    for s in snapshots.iter().filter(|s| runs.as_ref().is_none_or(|r| r.contains(&s.run_id))) {
        if let Some(value) = s.metric(key)? {
            points.push(TrendPoint { run_id: s.run_id, timestamp: s.timestamp, value });
        }
    }
    Ok(points)
}

fn stamp(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn render_csv(series: &[TrendPoint]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Invalid(format!("write csv: {e}"));
    w.write_record(["timestamp", "value"]).map_err(fail)?;
    for p in series {
        w.write_record([stamp(&p.timestamp), p.value.to_string()]).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("write csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 60.0;

/// Fixed-size plot: one polyline, points evenly spaced by run, y scaled to the
/// value range. Identical input gives identical bytes.
fn render_svg(series: &[TrendPoint], key: &str) -> String {
    let key = escape(key);
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">timestamp (UTC)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{key}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    if series.is_empty() {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">no data</text>"#,
            (x0 + x1) / 2.0,
            (y0 + y1) / 2.0
        );
    } else {
        let lo = series.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
        let hi = series.iter().map(|p| p.value).fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let x_of = |i: usize| {
            if series.len() == 1 {
                (x0 + x1) / 2.0
            } else {
                x0 + (x1 - x0) * i as f64 / (series.len() - 1) as f64
            }
        };
        let y_of = |v: f64| if hi > lo { y1 - (y1 - y0) * (v - lo) / span } else { (y0 + y1) / 2.0 };
        let points: Vec<String> =
            series.iter().enumerate().map(|(i, p)| format!("{:.1},{:.1}", x_of(i), y_of(p.value))).collect();
        let _ =
            writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, points.join(" "));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 6.0, y_of(hi) + 4.0, hi);
        if hi > lo {
            let _ =
                writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 6.0, y_of(lo) + 4.0, lo);
        }
        let first = &series[0];
        let last = &series[series.len() - 1];
        let _ = writeln!(
            s,
            r#"<text x="{x0}" y="{:.1}" text-anchor="start">{}</text>"#,
            y1 + 18.0,
            stamp(&first.timestamp)
        );
        if series.len() > 1 {
            let _ = writeln!(
                s,
                r#"<text x="{x1}" y="{:.1}" text-anchor="end">{}</text>"#,
                y1 + 18.0,
                stamp(&last.timestamp)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// The plot as text. An empty series gives a header-only CSV or an SVG saying
/// "no data".
pub fn render_trend(series: &[TrendPoint], key: &str, format: PlotFormat) -> Result<String> {
    match format {
        PlotFormat::Csv => render_csv(series),
        PlotFormat::Svg => Ok(render_svg(series, key)),
    }
}

pub fn emit_trend_plot(series: &[TrendPoint], key: &str, out: &Path, format: PlotFormat) -> Result<()> {
    let text = render_trend(series, key, format)?;
    std::fs::write(out, text).map_err(|e| Error::io(out, e))
}
