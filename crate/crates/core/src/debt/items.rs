//! TD items: one finding in the nine-field representation (id, name, location,
//! responsible, dimension, date/time, context, propagation rule,
//! intentionality) plus its remediation effort.

use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{lines_to_cover, CostModel};
use crate::clones::CloneBlock;
use crate::coverage::CoverageData;
use crate::metrics::{ApiItem, ApiKind, ClassSpan, FunctionSpan};
use crate::rules::{Category, Dimension, Severity, Violation};

pub const NOT_ASSIGNED: &str = "Not Assigned";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemKind {
    Bug,
    Vulnerability,
    CodeSmell,
    SecurityHotspot,
    TestCoverage,
    CommentsCompleteness,
}

impl ItemKind {
    pub const ALL: [ItemKind; 6] = [
        ItemKind::Bug,
        ItemKind::Vulnerability,
        ItemKind::CodeSmell,
        ItemKind::SecurityHotspot,
        ItemKind::TestCoverage,
        ItemKind::CommentsCompleteness,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ItemKind::Bug => "Bug",
            ItemKind::Vulnerability => "Vulnerability",
            ItemKind::CodeSmell => "Code Smell",
            ItemKind::SecurityHotspot => "Security Hotspot",
            ItemKind::TestCoverage => "Test Coverage",
            ItemKind::CommentsCompleteness => "Comments Completeness",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ItemKind::Bug => "bug",
            ItemKind::Vulnerability => "vulnerability",
            ItemKind::CodeSmell => "code_smell",
            ItemKind::SecurityHotspot => "security_hotspot",
            ItemKind::TestCoverage => "test_coverage",
            ItemKind::CommentsCompleteness => "comments_completeness",
        }
    }

    pub fn from_category(c: Category) -> Self {
        match c {
            Category::Bug => ItemKind::Bug,
            Category::Vulnerability => ItemKind::Vulnerability,
            Category::CodeSmell => ItemKind::CodeSmell,
            Category::SecurityHotspot => ItemKind::SecurityHotspot,
        }
    }

    /// The dimension each kind of item belongs to.
    pub fn dimension(self) -> Dimension {
        match self {
            ItemKind::TestCoverage => Dimension::TestDebt,
            ItemKind::CommentsCompleteness => Dimension::DocumentationDebt,
            _ => Dimension::CodeDebt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Intentionality {
    Intentional,
    Unintentional,
    NotApplicable,
}

impl Intentionality {
    pub fn label(self) -> &'static str {
        match self {
            Intentionality::Intentional => "Intentional",
            Intentionality::Unintentional => "Unintentional",
            Intentionality::NotApplicable => "N/A",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemStatus {
    #[default]
    Open,
    Acknowledged,
    WontFix,
}

impl ItemStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ItemStatus::Open => "open",
            ItemStatus::Acknowledged => "acknowledged",
            ItemStatus::WontFix => "wont_fix",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Location {
    pub file: String,
    /// 0 when the item concerns the whole file.
    pub line: u32,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.file)
        } else {
            write!(f, "{}:{}", self.file, self.line)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdItem {
    pub id: String,
    pub kind: ItemKind,
    pub location: Location,
    pub responsible: String,
    pub dimension: Dimension,
    pub datetime: DateTime<Utc>,
    pub context: String,
    pub propagation_rule: String,
    pub intentionality: Intentionality,
    pub remediation_minutes: u64,
    /// Rule id, or the metric that produced the item.
    pub source: String,
    pub severity: Option<Severity>,
    /// Stable identity across runs: source, file and a line-independent anchor.
    pub fingerprint: String,
    #[serde(default)]
    pub status: ItemStatus,
}

impl TdItem {
    pub fn name(&self) -> &'static str {
        self.kind.label()
    }
}

/// First 16 hex digits of SHA-256 over source, file and the anchor text with
/// whitespace collapsed.
pub fn fingerprint(source: &str, file: &str, anchor: &str) -> String {
    let anchor = anchor.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut h = Sha256::new();
    for part in [source, file, anchor.as_str()] {
        h.update(part.as_bytes());
        h.update([0]);
    }
    hex::encode(&h.finalize()[..8])
}

/// Inputs from which items are derived.
#[derive(Debug, Clone, Copy, Default)]
pub struct ItemSources<'a> {
    pub violations: &'a [Violation],
    pub clone_blocks: &'a [CloneBlock],
    pub api_items: &'a [ApiItem],
    pub functions: &'a [FunctionSpan],
    pub classes: &'a [ClassSpan],
    pub coverage: Option<&'a CoverageData>,
}

struct Draft {
    kind: ItemKind,
    location: Location,
    dimension: Dimension,
    context: String,
    propagation: String,
    intentionality: Intentionality,
    minutes: u64,
    source: String,
    severity: Option<Severity>,
    anchor: String,
}

fn minutes(hours: f64) -> u64 {
    (hours * 60.0).round() as u64
}

/// Items ordered by location, then kind and source; ids are `<project>.<n>`.
pub fn to_td_items(sources: &ItemSources, clock: DateTime<Utc>, m: &CostModel, project_id: u32) -> Vec<TdItem> {
    let mut drafts = Vec::new();

    for v in sources.violations {
        drafts.push(Draft {
            kind: ItemKind::from_category(v.category),
            location: Location { file: v.file.clone(), line: v.line },
            dimension: v.dimension,
            context: v.message.clone(),
            propagation: v.propagation.clone(),
            intentionality: Intentionality::Unintentional,
            minutes: u64::from(v.remediation_minutes),
            source: v.rule_id.clone(),
            severity: Some(v.severity),
            anchor: v.line_context.clone(),
        });
    }

    for block in sources.clone_blocks {
        let first = &block.instances[0];
        let others: Vec<String> =
            block.instances[1..].iter().map(|i| format!("{}:{}-{}", i.file, i.start_line, i.end_line)).collect();
        drafts.push(Draft {
            kind: ItemKind::CodeSmell,
            location: Location { file: first.file.clone(), line: first.start_line },
            dimension: Dimension::CodeDebt,
            context: format!(
                "Duplicated block of {} tokens (lines {}-{}), also at {}",
                block.token_length,
                first.start_line,
                first.end_line,
                others.join(", ")
            ),
            propagation: "N/A".to_string(),
            intentionality: Intentionality::Unintentional,
            minutes: minutes(m.cost_to_fix_one_block),
            source: "duplication".to_string(),
            severity: None,
            anchor: format!("{} tokens x{}", block.token_length, block.instances.len()),
        });
    }

    for f in sources.functions.iter().filter(|f| f.cyclomatic >= m.function_complexity_threshold) {
        drafts.push(Draft {
            kind: ItemKind::CodeSmell,
            location: Location { file: f.file.clone(), line: f.start_line },
            dimension: Dimension::CodeDebt,
            context: format!(
                "Function `{}` has cyclomatic complexity {} (split at {} or more)",
                f.name, f.cyclomatic, m.function_complexity_threshold
            ),
            propagation: "N/A".to_string(),
            intentionality: Intentionality::Unintentional,
            minutes: minutes(m.cost_to_split_a_method),
            source: "function-complexity".to_string(),
            severity: None,
            anchor: f.name.clone(),
        });
    }

    for c in sources.classes.iter().filter(|c| c.total_complexity >= m.class_complexity_threshold) {
        drafts.push(Draft {
            kind: ItemKind::CodeSmell,
            location: Location { file: c.file.clone(), line: c.start_line },
            dimension: Dimension::CodeDebt,
            context: format!(
                "Class `{}` has total complexity {} (split at {} or more)",
                c.name, c.total_complexity, m.class_complexity_threshold
            ),
            propagation: "N/A".to_string(),
            intentionality: Intentionality::Unintentional,
            minutes: minutes(m.cost_to_split_a_class),
            source: "class-complexity".to_string(),
            severity: None,
            anchor: c.name.clone(),
        });
    }

    for a in sources.api_items.iter().filter(|a| !a.documented) {
        let kind = match a.kind {
            ApiKind::Class => "type",
            ApiKind::Method => "method",
            ApiKind::Field => "field",
        };
        drafts.push(Draft {
            kind: ItemKind::CommentsCompleteness,
            location: Location { file: a.file.clone(), line: a.line },
            dimension: Dimension::DocumentationDebt,
            context: format!("Public {kind} `{}` is not documented", a.name),
            propagation: "N/A".to_string(),
            intentionality: Intentionality::NotApplicable,
            minutes: minutes(m.cost_to_comment_one_api),
            source: "undocumented-api".to_string(),
            severity: None,
            anchor: format!("{kind} {}", a.name),
        });
    }

    if let Some(cov) = sources.coverage {
        for (path, f) in &cov.files {
            let needed = lines_to_cover(f.coverable_lines(), f.covered_lines(), m);
            if needed == 0 {
                continue;
            }
            drafts.push(Draft {
                kind: ItemKind::TestCoverage,
                location: Location { file: path.clone(), line: 0 },
                dimension: Dimension::TestDebt,
                context: format!(
                    "{} of {} coverable lines covered; {} more needed to reach {}%",
                    f.covered_lines(),
                    f.coverable_lines(),
                    needed,
                    m.coverage_target * 100.0
                ),
                propagation: "N/A".to_string(),
                intentionality: Intentionality::NotApplicable,
                minutes: minutes(m.cost_to_cover_uncovered_lines_of_code * needed as f64),
                source: "coverage".to_string(),
                severity: None,
                anchor: String::new(),
            });
        }
    }

    drafts.sort_by(|a, b| {
        (&a.location, a.kind, &a.source, &a.context).cmp(&(&b.location, b.kind, &b.source, &b.context))
    });
    drafts
        .into_iter()
        .enumerate()
        .map(|(n, d)| TdItem {
            id: format!("{project_id}.{}", n + 1),
            fingerprint: fingerprint(&d.source, &d.location.file, &d.anchor),
            kind: d.kind,
            location: d.location,
            responsible: NOT_ASSIGNED.to_string(),
            dimension: d.dimension,
            datetime: clock,
            context: d.context,
            propagation_rule: d.propagation,
            intentionality: d.intentionality,
            remediation_minutes: d.minutes,
            source: d.source,
            severity: d.severity,
            status: ItemStatus::Open,
        })
        .collect()
}
