//! The end-to-end pipeline: scan, tokenize, measure, detect clones, apply
//! rules, align coverage, price the debt and assemble a snapshot.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{DateTime, SubsecRound, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clones::{detect_clones, summarize_duplication, CloneBlock, CloneSettings};
use crate::config::Config;
use crate::coverage::CoverageData;
use crate::debt::{
    compute_principal, compute_ratings, estimate_efforts, td_ratio, to_td_items, CostModel, IssueCounts, ItemSources,
    PrincipalInputs,
};
use crate::ingest::{load_project, Language, LineMetrics, ScanConfig};
use crate::lexer::{tokenize_file, TokenStream};
use crate::metrics::{analyze_file, analyze_structure, file_imports, merge_imports, FileMetrics, PackageGraph};
use crate::monitor::{
    apply_annotations, items_digest, load_annotations, Annotation, Snapshot, ANNOTATIONS_FILE, SCHEMA_VERSION,
    STORE_DIR,
};
use crate::rules::{apply_rules_with, Dimension, RuleSet, Violation};
use crate::Result;

/// Everything the pipeline is parameterised by.
#[derive(Debug, Clone)]
pub struct Settings {
    pub project_id: u32,
    pub scan: ScanConfig,
    pub clones: CloneSettings,
    pub cost_model: CostModel,
    pub rules: RuleSet,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            project_id: 1,
            scan: ScanConfig::default(),
            clones: CloneSettings::default(),
            cost_model: CostModel::default(),
            rules: RuleSet::builtin(),
        }
    }
}

impl Settings {
    pub fn from_config(config: &Config) -> Result<Settings> {
        Ok(Settings {
            project_id: config.project_id,
            scan: config.scan.clone(),
            clones: config.clones,
            cost_model: config.cost_model.clone(),
            rules: config.rule_set()?,
        })
    }
}

/// The analysis clock: now, or `SOURCE_DATE_EPOCH` when set, to whole seconds.
pub fn clock() -> DateTime<Utc> {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(|| Utc::now().trunc_subsecs(0))
}

/// [`analyze_project`] driven by a loaded config, picking up the project's
/// annotations file and stamping the result with [`clock`].
pub fn analyze_with_config(root: &Path, config: &Config, coverage: Option<&CoverageData>) -> Result<Analysis> {
    let settings = Settings::from_config(config)?;
    let annotations = load_annotations(&root.join(STORE_DIR).join(ANNOTATIONS_FILE))?;
    analyze_project(root, &settings, coverage, &annotations, clock())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageSummary {
    pub files: u64,
    pub lines: LineMetrics,
    pub statements: u64,
    pub functions: u64,
    pub classes: u64,
}

impl LanguageSummary {
    fn add(&mut self, other: &LanguageSummary) {
        self.files += other.files;
        self.lines.add(&other.lines);
        self.statements += other.statements;
        self.functions += other.functions;
        self.classes += other.classes;
    }
}

/// Project overview: size per language and in total.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub totals: LanguageSummary,
    pub per_language: BTreeMap<Language, LanguageSummary>,
    pub packages: u64,
    pub package_edges: u64,
    pub package_edge_weight: u64,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    /// Not yet recorded: `run_id` is 0.
    pub snapshot: Snapshot,
    pub violations: Vec<Violation>,
    pub clone_blocks: Vec<CloneBlock>,
    pub package_graph: PackageGraph,
    pub warnings: Vec<String>,
}

struct FileResult {
    stream: TokenStream,
    metrics: FileMetrics,
    violations: Vec<Violation>,
}

/// Analyze the tree at `root`. Files are processed in parallel and merged in
/// path order, so the result does not depend on scheduling.
pub fn analyze_project(
    root: &Path,
    settings: &Settings,
    coverage: Option<&CoverageData>,
    annotations: &[Annotation],
    clock: DateTime<Utc>,
) -> Result<Analysis> {
    settings.clones.validate()?;
    settings.cost_model.validate()?;
    let m = &settings.cost_model;
    let project = load_project(root, &settings.scan)?;
    let mut warnings = project.scan.warnings.clone();

    let results: Vec<FileResult> = project
        .scan
        .files
        .par_iter()
        .zip(project.contents.par_iter())
        .map(|(file, content)| {
            let stream = tokenize_file(file, content);
            let structure = analyze_structure(&stream);
            let metrics = analyze_file(&stream, &structure);
            let violations = apply_rules_with(&stream, content, &structure, &settings.rules);
            FileResult { stream, metrics, violations }
        })
        .collect();

    let mut summary = ProjectSummary::default();
    for (file, r) in project.scan.files.iter().zip(&results) {
        let s = LanguageSummary {
            files: 1,
            lines: file.line_metrics,
            statements: r.metrics.statements,
            functions: r.metrics.functions.len() as u64,
            classes: r.metrics.classes.len() as u64,
        };
        summary.totals.add(&s);
        summary.per_language.entry(file.language).or_default().add(&s);
        warnings.extend(r.metrics.diagnostics.iter().cloned());
    }

    let imports: Vec<_> = results.iter().filter(|r| r.stream.tokenized).map(|r| file_imports(&r.stream)).collect();
    let package_graph = merge_imports(&imports);
    summary.packages = package_graph.packages.len() as u64;
    summary.package_edges = package_graph.edges.len() as u64;
    summary.package_edge_weight = package_graph.total_weight();

    let streams: Vec<TokenStream> = results.iter().map(|r| r.stream.clone()).collect();
    let clone_blocks = detect_clones(&streams, &settings.clones);
    let duplication = summarize_duplication(&clone_blocks, summary.totals.lines.total_lines);

    let aligned = coverage.map(|c| {
        let paths: Vec<&str> = project.scan.files.iter().map(|f| f.path.as_str()).collect();
        let (aligned, w) = c.align_to(&paths);
        warnings.extend(w);
        aligned
    });

    let violations: Vec<Violation> = results.iter().flat_map(|r| r.violations.iter().cloned()).collect();
    let functions: Vec<_> = results.iter().flat_map(|r| r.metrics.functions.iter().cloned()).collect();
    let classes: Vec<_> = results.iter().flat_map(|r| r.metrics.classes.iter().cloned()).collect();
    let api_items: Vec<_> = results.iter().flat_map(|r| r.metrics.api_items.iter().cloned()).collect();

    let inputs = PrincipalInputs {
        duplicated_blocks: duplication.duplicated_blocks,
        violations: PrincipalInputs::count_violations(&violations, m),
        undocumented_api: api_items.iter().filter(|a| !a.documented).count() as u64,
        coverable_lines: aligned.as_ref().map_or(0, CoverageData::coverable_lines),
        covered_lines: aligned.as_ref().map_or(0, CoverageData::covered_lines),
        package_edge_weight: summary.package_edge_weight,
        complex_functions: functions.iter().filter(|f| f.cyclomatic >= m.function_complexity_threshold).count() as u64,
        complex_classes: classes.iter().filter(|c| c.total_complexity >= m.class_complexity_threshold).count() as u64,
    };
    let principal = compute_principal(&inputs, m);

    let sources = ItemSources {
        violations: &violations,
        clone_blocks: &clone_blocks,
        api_items: &api_items,
        functions: &functions,
        classes: &classes,
        coverage: aligned.as_ref(),
    };
    let mut items = to_td_items(&sources, clock, m, settings.project_id);
    warnings.extend(apply_annotations(&mut items, annotations));

    let efforts = estimate_efforts(&items);
    let ratio_minutes: u64 =
        items.iter().filter(|i| i.dimension != Dimension::TestDebt).map(|i| i.remediation_minutes).sum();
    let loc = summary.totals.lines.code_lines;
    let ratio = td_ratio(ratio_minutes, loc, m);
    let counts = IssueCounts::from_violations(&violations);
    let ratings = compute_ratings(&counts, ratio, m);

    let snapshot = Snapshot {
        schema_version: SCHEMA_VERSION,
        run_id: 0,
        timestamp: clock,
        loc,
        project: summary,
        counts,
        duplication,
        coverage_percent: aligned.as_ref().and_then(CoverageData::percent),
        principal,
        efforts,
        ratio_minutes,
        td_ratio: ratio,
        ratings,
        items_digest: items_digest(&items),
        items,
    };
    Ok(Analysis { snapshot, violations, clone_blocks, package_graph, warnings })
}
