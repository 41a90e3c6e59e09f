//! Run history and monitoring: snapshots, planned-check diffs, threshold
//! gates, trend series and per-item annotations.

mod annotations;
mod gate;
mod store;
mod trend;

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::ProjectSummary;
use crate::clones::DuplicationSummary;
use crate::debt::{EffortTotals, IssueCounts, PrincipalReport, Ratings, TdItem};
use crate::rules::{Category, Severity};
use crate::{Error, Result};

pub use annotations::{apply_annotations, load_annotations, parse_annotations, Annotation, ANNOTATIONS_FILE};
pub use gate::{
    evaluate_gate, load_gate_config, parse_gate_config, Comparator, Condition, ConditionVerdict, GateConfig, GateLevel,
    GateResult, GateStatus,
};
pub use store::{HistoryStore, HISTORY_FILE, LOCK_FILE, STORE_DIR};
pub use trend::{emit_trend_plot, render_trend, trend_series, PlotFormat, TrendPoint};

pub const SCHEMA_VERSION: u32 = 1;

/// One analysis run as persisted in the history store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub schema_version: u32,
    /// Assigned by the store; 0 until recorded.
    pub run_id: u64,
    pub timestamp: DateTime<Utc>,
    pub loc: u64,
    pub project: ProjectSummary,
    pub counts: IssueCounts,
    pub duplication: DuplicationSummary,
    pub coverage_percent: Option<f64>,
    pub principal: PrincipalReport,
    pub efforts: EffortTotals,
    /// Remediation minutes entering the TD ratio.
    pub ratio_minutes: u64,
    pub td_ratio: f64,
    pub ratings: Ratings,
    pub items: Vec<TdItem>,
    pub items_digest: String,
}

/// SHA-256 over the serialized items with their timestamps blanked, so two runs
/// over the same tree share a digest.
pub fn items_digest(items: &[TdItem]) -> String {
    let mut h = Sha256::new();
    for item in items {
        let mut v = serde_json::to_value(item).expect("items serialize");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("datetime");
        }
        h.update(v.to_string().as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

type Extract = fn(&Snapshot) -> Option<f64>;

fn category_issues(s: &Snapshot, c: Category) -> Option<f64> {
    Some(s.counts.category_total(c) as f64)
}

fn severity_issues(s: &Snapshot, sev: Severity) -> Option<f64> {
    Some(s.counts.severity_total(sev) as f64)
}

/// The documented metric keys accepted by gates, diffs and trends.
const METRICS: &[(&str, Extract)] = &[
    ("loc", |s| Some(s.loc as f64)),
    ("lines", |s| Some(s.project.totals.lines.total_lines as f64)),
    ("files", |s| Some(s.project.totals.files as f64)),
    ("statements", |s| Some(s.project.totals.statements as f64)),
    ("functions", |s| Some(s.project.totals.functions as f64)),
    ("classes", |s| Some(s.project.totals.classes as f64)),
    ("issues", |s| Some(s.counts.total() as f64)),
    ("bug_issues", |s| category_issues(s, Category::Bug)),
    ("vulnerability_issues", |s| category_issues(s, Category::Vulnerability)),
    ("code_smell_issues", |s| category_issues(s, Category::CodeSmell)),
    ("security_hotspot_issues", |s| category_issues(s, Category::SecurityHotspot)),
    ("blocker_issues", |s| severity_issues(s, Severity::Blocker)),
    ("critical_issues", |s| severity_issues(s, Severity::Critical)),
    ("major_issues", |s| severity_issues(s, Severity::Major)),
    ("minor_issues", |s| severity_issues(s, Severity::Minor)),
    ("info_issues", |s| severity_issues(s, Severity::Info)),
    ("td_items", |s| Some(s.items.len() as f64)),
    ("duplicated_blocks", |s| Some(s.duplication.duplicated_blocks as f64)),
    ("duplicated_lines", |s| Some(s.duplication.duplicated_lines as f64)),
    ("duplication_density", |s| Some(s.duplication.density)),
    ("coverage_percent", |s| s.coverage_percent),
    ("principal_hours", |s| Some(s.principal.total.hours)),
    ("principal_cost", |s| Some(s.principal.total.currency)),
    ("duplication_hours", |s| Some(s.principal.duplication.hours)),
    ("violations_hours", |s| Some(s.principal.violations.hours)),
    ("comments_hours", |s| Some(s.principal.comments.hours)),
    ("coverage_hours", |s| Some(s.principal.coverage.hours)),
    ("design_hours", |s| Some(s.principal.design.hours)),
    ("complexity_hours", |s| Some(s.principal.complexity.hours)),
    ("remediation_minutes", |s| Some(s.efforts.total_minutes as f64)),
    ("td_ratio", |s| Some(s.td_ratio)),
    ("reliability_rating", |s| Some(f64::from(s.ratings.reliability.score()))),
    ("security_rating", |s| Some(f64::from(s.ratings.security.score()))),
    ("maintainability_rating", |s| Some(f64::from(s.ratings.maintainability.score()))),
];

pub fn metric_keys() -> impl Iterator<Item = &'static str> {
    METRICS.iter().map(|(k, _)| *k)
}

pub fn is_metric_key(key: &str) -> bool {
    METRICS.iter().any(|(k, _)| *k == key)
}

pub(crate) fn unknown_metric(key: &str) -> Error {
    Error::UnknownMetric { key: key.to_string(), valid: metric_keys().collect::<Vec<_>>().join(", ") }
}

impl Snapshot {
    /// Value of a metric; `Ok(None)` when the snapshot lacks it (coverage without
    /// a report).
    pub fn metric(&self, key: &str) -> Result<Option<f64>> {
        METRICS.iter().find(|(k, _)| *k == key).map(|(_, f)| f(self)).ok_or_else(|| unknown_metric(key))
    }

    pub fn metrics(&self) -> BTreeMap<&'static str, Option<f64>> {
        METRICS.iter().map(|(k, f)| (*k, f(self))).collect()
    }
}

/// Planned-check comparison of two runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta {
    pub from_run: u64,
    pub to_run: u64,
    /// `to − from` per metric key; `None` where either side lacks the metric.
    pub metrics: BTreeMap<String, Option<f64>>,
    /// Fingerprints present (or more often present) in `to` than in `from`.
    pub new_items: Vec<String>,
    pub resolved_items: Vec<String>,
}

impl Delta {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied().flatten()
    }

    pub fn is_zero(&self) -> bool {
        self.new_items.is_empty()
            && self.resolved_items.is_empty()
            && self.metrics.values().all(|v| v.is_none_or(|d| d == 0.0))
    }
}

fn fingerprint_counts(s: &Snapshot) -> BTreeMap<&str, i64> {
    let mut m = BTreeMap::new();
    for item in &s.items {
        *m.entry(item.fingerprint.as_str()).or_insert(0) += 1;
    }
    m
}

pub fn diff_snapshots(a: &Snapshot, b: &Snapshot) -> Delta {
    let metrics = METRICS
        .iter()
        .map(|(k, f)| {
            let d = match (f(a), f(b)) {
                (Some(x), Some(y)) => Some(y - x),
                _ => None,
            };
            (k.to_string(), d)
        })
        .collect();

    let (ca, cb) = (fingerprint_counts(a), fingerprint_counts(b));
    let mut new_items = Vec::new();
    let mut resolved_items = Vec::new();
    for fp in ca.keys().chain(cb.keys()).collect::<std::collections::BTreeSet<_>>() {
        let n = cb.get(fp).copied().unwrap_or(0) - ca.get(fp).copied().unwrap_or(0);
        let bucket = if n > 0 { &mut new_items } else { &mut resolved_items };
        bucket.extend(std::iter::repeat_n(fp.to_string(), n.unsigned_abs() as usize));
    }

    Delta { from_run: a.run_id, to_run: b.run_id, metrics, new_items, resolved_items }
}
