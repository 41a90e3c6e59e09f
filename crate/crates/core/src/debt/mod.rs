//! TD principal accounting.
//!
//! Unit costs are effort-hours per unit; the hourly rate converts hours to
//! currency. Every component is reported in both.

mod effort;
mod items;
mod ratings;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rules::{Category, Dimension, Severity, Violation};
use crate::{Error, Result};

pub use effort::{estimate_efforts, format_effort, parse_effort, EffortTotals, MINUTES_PER_DAY};
pub use items::{
    fingerprint, to_td_items, Intentionality, ItemKind, ItemSources, ItemStatus, Location, TdItem, NOT_ASSIGNED,
};
pub use ratings::{compute_ratings, maintainability_rating, severity_rating, Rating, Ratings};

/// Bucket a severity falls into for the violations formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostClass {
    High,
    Medium,
    Low,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeverityClasses {
    pub blocker: CostClass,
    pub critical: CostClass,
    pub major: CostClass,
    pub minor: CostClass,
    pub info: CostClass,
}

impl Default for SeverityClasses {
    fn default() -> Self {
        SeverityClasses {
            blocker: CostClass::High,
            critical: CostClass::High,
            major: CostClass::Medium,
            minor: CostClass::Low,
            info: CostClass::Low,
        }
    }
}

impl SeverityClasses {
    pub fn class_of(&self, severity: Severity) -> CostClass {
        match severity {
            Severity::Blocker => self.blocker,
            Severity::Critical => self.critical,
            Severity::Major => self.major,
            Severity::Minor => self.minor,
            Severity::Info => self.info,
        }
    }
}

/// Parameters of the principal model. Field names follow the cost rows of the
/// model so a config section can set them by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostModel {
    pub cost_to_fix_one_block: f64,
    pub cost_to_fix_high_severity_violations: f64,
    pub cost_to_fix_medium_severity_violations: f64,
    pub cost_to_fix_low_severity_violations: f64,
    pub cost_to_comment_one_api: f64,
    pub cost_to_cover_uncovered_lines_of_code: f64,
    pub cost_to_cut_an_edge_between_two_files: f64,
    pub cost_to_split_a_method: f64,
    pub cost_to_split_a_class: f64,
    /// Currency per hour.
    pub hourly_rate: f64,
    /// Estimated cost of writing one line of code, for the TD ratio.
    pub dev_cost_minutes_per_line: f64,
    /// Line coverage the coverage component aims for, in (0, 1].
    pub coverage_target: f64,
    /// Functions with cyclomatic complexity at or above this need a split.
    pub function_complexity_threshold: u32,
    /// Classes whose summed member complexity is at or above this need a split.
    pub class_complexity_threshold: u32,
    pub severity_classes: SeverityClasses,
    /// Upper TD-ratio bounds (percent) of maintainability ratings A to D.
    pub maintainability_bands: [f64; 4],
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            cost_to_fix_one_block: 2.0,
            cost_to_fix_high_severity_violations: 0.5,
            cost_to_fix_medium_severity_violations: 0.3,
            cost_to_fix_low_severity_violations: 0.1,
            cost_to_comment_one_api: 0.2,
            cost_to_cover_uncovered_lines_of_code: 0.2,
            cost_to_cut_an_edge_between_two_files: 4.0,
            cost_to_split_a_method: 0.5,
            cost_to_split_a_class: 8.0,
            hourly_rate: 50.0,
            dev_cost_minutes_per_line: 30.0,
            coverage_target: 0.8,
            function_complexity_threshold: 8,
            class_complexity_threshold: 60,
            severity_classes: SeverityClasses::default(),
            maintainability_bands: [5.0, 10.0, 20.0, 50.0],
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cost_to_fix_one_block", self.cost_to_fix_one_block),
            ("cost_to_fix_high_severity_violations", self.cost_to_fix_high_severity_violations),
            ("cost_to_fix_medium_severity_violations", self.cost_to_fix_medium_severity_violations),
            ("cost_to_fix_low_severity_violations", self.cost_to_fix_low_severity_violations),
            ("cost_to_comment_one_api", self.cost_to_comment_one_api),
            ("cost_to_cover_uncovered_lines_of_code", self.cost_to_cover_uncovered_lines_of_code),
            ("cost_to_cut_an_edge_between_two_files", self.cost_to_cut_an_edge_between_two_files),
            ("cost_to_split_a_method", self.cost_to_split_a_method),
            ("cost_to_split_a_class", self.cost_to_split_a_class),
            ("hourly_rate", self.hourly_rate),
            ("dev_cost_minutes_per_line", self.dev_cost_minutes_per_line),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("cost_model.{name} must be a positive number (got {v})")));
            }
        }
        if !(self.coverage_target > 0.0 && self.coverage_target <= 1.0) {
            return Err(Error::Config(format!(
                "cost_model.coverage_target must be in (0, 1] (got {})",
                self.coverage_target
            )));
        }
        if self.function_complexity_threshold == 0 || self.class_complexity_threshold == 0 {
            return Err(Error::Config("cost_model complexity thresholds must be ≥ 1".to_string()));
        }
        let b = self.maintainability_bands;
        if !(b[0] >= 0.0 && b.windows(2).all(|w| w[0] < w[1]) && b.iter().all(|x| x.is_finite())) {
            return Err(Error::Config(format!("cost_model.maintainability_bands must be increasing (got {b:?})")));
        }
        Ok(())
    }

    pub fn cost_of_class(&self, class: CostClass) -> f64 {
        match class {
            CostClass::High => self.cost_to_fix_high_severity_violations,
            CostClass::Medium => self.cost_to_fix_medium_severity_violations,
            CostClass::Low => self.cost_to_fix_low_severity_violations,
        }
    }

    fn amount(&self, hours: f64) -> Amount {
        Amount { hours, currency: hours * self.hourly_rate }
    }
}

/// Effort and its price.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Amount {
    pub hours: f64,
    pub currency: f64,
}

impl Amount {
    fn plus(self, other: Amount) -> Amount {
        Amount { hours: self.hours + other.hours, currency: self.currency + other.currency }
    }
}

pub fn violations_hours(high: u64, medium: u64, low: u64, m: &CostModel) -> f64 {
    m.cost_to_fix_high_severity_violations * high as f64
        + m.cost_to_fix_medium_severity_violations * medium as f64
        + m.cost_to_fix_low_severity_violations * low as f64
}

pub fn violations_cost(high: u64, medium: u64, low: u64, m: &CostModel) -> f64 {
    violations_hours(high, medium, low, m) * m.hourly_rate
}

pub fn duplication_cost(blocks: u64, m: &CostModel) -> f64 {
    m.cost_to_fix_one_block * blocks as f64 * m.hourly_rate
}

pub fn comments_cost(undocumented_api: u64, m: &CostModel) -> f64 {
    m.cost_to_comment_one_api * undocumented_api as f64 * m.hourly_rate
}

/// Lines that must gain coverage to reach the target.
pub fn lines_to_cover(coverable: u64, covered: u64, m: &CostModel) -> u64 {
    // The epsilon keeps products like 0.8 × 15 = 12.000000000000002 from rounding up.
    let target = (m.coverage_target * coverable as f64 - 1e-9).ceil().max(0.0) as u64;
    target.saturating_sub(covered)
}

pub fn coverage_cost(coverable: u64, covered: u64, m: &CostModel) -> f64 {
    m.cost_to_cover_uncovered_lines_of_code * lines_to_cover(coverable, covered, m) as f64 * m.hourly_rate
}

pub fn design_cost(package_edge_weight: u64, m: &CostModel) -> f64 {
    m.cost_to_cut_an_edge_between_two_files * package_edge_weight as f64 * m.hourly_rate
}

pub fn complexity_hours(functions_over: u64, classes_over: u64, m: &CostModel) -> f64 {
    m.cost_to_split_a_method * functions_over as f64 + m.cost_to_split_a_class * classes_over as f64
}

pub fn complexity_cost(functions_over: u64, classes_over: u64, m: &CostModel) -> f64 {
    complexity_hours(functions_over, classes_over, m) * m.hourly_rate
}

/// Violation counts per cost class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub high: u64,
    pub medium: u64,
    pub low: u64,
}

impl ClassCounts {
    pub fn add(&mut self, class: CostClass) {
        match class {
            CostClass::High => self.high += 1,
            CostClass::Medium => self.medium += 1,
            CostClass::Low => self.low += 1,
        }
    }
}

/// Everything the six component formulas count.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalInputs {
    pub duplicated_blocks: u64,
    /// Violations per dimension of the rule that raised them.
    pub violations: BTreeMap<Dimension, ClassCounts>,
    pub undocumented_api: u64,
    pub coverable_lines: u64,
    pub covered_lines: u64,
    pub package_edge_weight: u64,
    pub complex_functions: u64,
    pub complex_classes: u64,
}

impl PrincipalInputs {
    pub fn count_violations(violations: &[Violation], m: &CostModel) -> BTreeMap<Dimension, ClassCounts> {
        let mut out: BTreeMap<Dimension, ClassCounts> = BTreeMap::new();
        for v in violations {
            out.entry(v.dimension).or_default().add(m.severity_classes.class_of(v.severity));
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PrincipalReport {
    pub duplication: Amount,
    pub violations: Amount,
    pub comments: Amount,
    pub coverage: Amount,
    pub design: Amount,
    pub complexity: Amount,
    pub total: Amount,
    pub per_dimension: BTreeMap<Dimension, Amount>,
}

impl PrincipalReport {
    pub fn components(&self) -> [(&'static str, Amount); 6] {
        [
            ("duplication", self.duplication),
            ("violations", self.violations),
            ("comments", self.comments),
            ("coverage", self.coverage),
            ("design", self.design),
            ("complexity", self.complexity),
        ]
    }
}

/// Sum of the six components, in the order duplication, violations, comments,
/// coverage, design, complexity.
pub fn total_principal(components: [Amount; 6]) -> Amount {
    components.into_iter().fold(Amount::default(), Amount::plus)
}

pub fn compute_principal(inputs: &PrincipalInputs, m: &CostModel) -> PrincipalReport {
    let hours_of = |c: &ClassCounts| violations_hours(c.high, c.medium, c.low, m);
    let mut all = ClassCounts::default();
    for c in inputs.violations.values() {
        all.high += c.high;
        all.medium += c.medium;
        all.low += c.low;
    }

    let duplication = m.amount(m.cost_to_fix_one_block * inputs.duplicated_blocks as f64);
    let violations = m.amount(hours_of(&all));
    let comments = m.amount(m.cost_to_comment_one_api * inputs.undocumented_api as f64);
    let coverage = m.amount(
        m.cost_to_cover_uncovered_lines_of_code
            * lines_to_cover(inputs.coverable_lines, inputs.covered_lines, m) as f64,
    );
    let design = m.amount(m.cost_to_cut_an_edge_between_two_files * inputs.package_edge_weight as f64);
    let complexity = m.amount(complexity_hours(inputs.complex_functions, inputs.complex_classes, m));
    let total = total_principal([duplication, violations, comments, coverage, design, complexity]);

    let mut per_dimension: BTreeMap<Dimension, Amount> =
        Dimension::ALL.iter().map(|&d| (d, Amount::default())).collect();
    let mut add = |d: Dimension, a: Amount| {
        let e = per_dimension.entry(d).or_default();
        *e = e.plus(a);
    };
    add(Dimension::CodeDebt, duplication);
    add(Dimension::CodeDebt, design);
    add(Dimension::CodeDebt, complexity);
    add(Dimension::DocumentationDebt, comments);
    add(Dimension::TestDebt, coverage);
    for (&d, c) in &inputs.violations {
        add(d, m.amount(hours_of(c)));
    }

    PrincipalReport { duplication, violations, comments, coverage, design, complexity, total, per_dimension }
}

/// Remediation effort as a percentage of the estimated development cost
/// (`loc × dev_cost_minutes_per_line`). An empty project has ratio 0.
pub fn td_ratio(remediation_minutes: u64, loc: u64, m: &CostModel) -> f64 {
    if loc == 0 {
        return 0.0;
    }
    100.0 * remediation_minutes as f64 / (loc as f64 * m.dev_cost_minutes_per_line)
}

/// Rule-violation counts per category and severity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssueCounts {
    pub counts: BTreeMap<Category, BTreeMap<Severity, u64>>,
}

impl IssueCounts {
    pub fn from_violations(violations: &[Violation]) -> Self {
        let mut c = IssueCounts::default();
        for v in violations {
            c.add(v.category, v.severity, 1);
        }
        c
    }

    pub fn add(&mut self, category: Category, severity: Severity, n: u64) {
        *self.counts.entry(category).or_default().entry(severity).or_default() += n;
    }

    pub fn get(&self, category: Category, severity: Severity) -> u64 {
        self.counts.get(&category).and_then(|m| m.get(&severity)).copied().unwrap_or(0)
    }

    pub fn category_total(&self, category: Category) -> u64 {
        self.counts.get(&category).map_or(0, |m| m.values().sum())
    }

    pub fn severity_total(&self, severity: Severity) -> u64 {
        Category::ALL.iter().map(|&c| self.get(c, severity)).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().flat_map(|m| m.values()).sum()
    }

    /// Most severe level with a nonzero count in `category`.
    pub fn worst(&self, category: Category) -> Option<Severity> {
        self.counts.get(&category)?.iter().filter(|(_, &n)| n > 0).map(|(&s, _)| s).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_target_rounding() {
        let m = CostModel::default();
        assert_eq!(lines_to_cover(15, 0, &m), 12);
        assert_eq!(lines_to_cover(100, 50, &m), 30);
        assert_eq!(lines_to_cover(100, 85, &m), 0);
        assert_eq!(lines_to_cover(1, 0, &m), 1);
        assert_eq!(lines_to_cover(0, 0, &m), 0);
    }

    #[test]
    fn validation() {
        assert!(CostModel::default().validate().is_ok());
        let bad = [
            CostModel { hourly_rate: 0.0, ..Default::default() },
            CostModel { cost_to_split_a_class: -1.0, ..Default::default() },
            CostModel { coverage_target: 1.5, ..Default::default() },
            CostModel { coverage_target: 0.0, ..Default::default() },
            CostModel { maintainability_bands: [5.0, 5.0, 20.0, 50.0], ..Default::default() },
            CostModel { dev_cost_minutes_per_line: f64::NAN, ..Default::default() },
        ];
        for m in bad {
            assert!(m.validate().is_err(), "{m:?}");
        }
    }

    #[test]
    fn per_dimension_rollup() {
        let m = CostModel::default();
        let mut inputs =
            PrincipalInputs { duplicated_blocks: 1, undocumented_api: 5, coverable_lines: 10, ..Default::default() };
        inputs.violations.insert(Dimension::DocumentationDebt, ClassCounts { low: 10, ..Default::default() });
        let r = compute_principal(&inputs, &m);
        assert!((r.per_dimension[&Dimension::CodeDebt].hours - 2.0).abs() < 1e-12);
        assert!((r.per_dimension[&Dimension::DocumentationDebt].hours - 2.0).abs() < 1e-12);
        assert!((r.per_dimension[&Dimension::TestDebt].hours - 1.6).abs() < 1e-12);
        assert!((r.total.hours - 5.6).abs() < 1e-12);
    }

    #[test]
    fn issue_counts() {
        let mut c = IssueCounts::default();
        assert_eq!(c.worst(Category::Bug), None);
        c.add(Category::Bug, Severity::Minor, 2);
        c.add(Category::Bug, Severity::Critical, 1);
        c.add(Category::Vulnerability, Severity::Blocker, 0);
        assert_eq!(c.worst(Category::Bug), Some(Severity::Critical));
        assert_eq!(c.worst(Category::Vulnerability), None);
        assert_eq!(c.total(), 3);
        assert_eq!(c.severity_total(Severity::Minor), 2);
    }
}
