//! Manifest-driven violation engine.
//!
//! Rules match token sequences, raw lines or comment text; a few builtins are
//! heuristics written directly against the token stream. Every rule carries the
//! metadata a debt item needs: category, severity, dimension, remediation effort,
//! a repayment suggestion and a propagation note.

mod builtin;
mod pattern;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ingest::Language;
use crate::lexer::{Token, TokenStream};
use crate::metrics::{analyze_structure, Structure};
use crate::{Error, Result};

pub use builtin::{builtin_rules, Check};
pub use pattern::TokenPattern;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Info,
    Minor,
    Major,
    Critical,
    Blocker,
}

impl Severity {
    pub const ALL: [Severity; 5] =
        [Severity::Info, Severity::Minor, Severity::Major, Severity::Critical, Severity::Blocker];

    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Minor => "minor",
            Severity::Major => "major",
            Severity::Critical => "critical",
            Severity::Blocker => "blocker",
        }
    }

    /// Remediation effort assumed when a rule does not state one.
    pub fn default_remediation_minutes(self) -> u32 {
        match self {
            Severity::Blocker => 60,
            Severity::Critical => 30,
            Severity::Major => 20,
            Severity::Minor => 10,
            Severity::Info => 5,
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Bug,
    Vulnerability,
    CodeSmell,
    SecurityHotspot,
}

impl Category {
    pub const ALL: [Category; 4] =
        [Category::Bug, Category::Vulnerability, Category::CodeSmell, Category::SecurityHotspot];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Bug => "bug",
            Category::Vulnerability => "vulnerability",
            Category::CodeSmell => "code_smell",
            Category::SecurityHotspot => "security_hotspot",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Category::Bug => "Bug",
            Category::Vulnerability => "Vulnerability",
            Category::CodeSmell => "Code Smell",
            Category::SecurityHotspot => "Security Hotspot",
        }
    }

    /// Every rule-detected category is code debt.
    pub fn default_dimension(self) -> Dimension {
        Dimension::CodeDebt
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    CodeDebt,
    TestDebt,
    DocumentationDebt,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [Dimension::CodeDebt, Dimension::TestDebt, Dimension::DocumentationDebt];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::CodeDebt => "code_debt",
            Dimension::TestDebt => "test_debt",
            Dimension::DocumentationDebt => "documentation_debt",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Dimension::CodeDebt => "Code Debt",
            Dimension::TestDebt => "Test Debt",
            Dimension::DocumentationDebt => "Documentation Debt",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a token match may start.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    #[default]
    Anywhere,
    FunctionBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matcher {
    /// Any of the patterns, over code tokens.
    Tokens(Vec<TokenPattern>),
    /// Plain substring of a raw source line.
    Lines(Vec<String>),
    /// Substring of comment text; raw lines when the file is not tokenized.
    Comments(Vec<String>),
    Check(Check),
}

impl Matcher {
    pub fn describe(&self) -> String {
        fn quoted<T: fmt::Display>(items: &[T]) -> String {
            items.iter().map(|p| format!("`{p}`")).collect::<Vec<_>>().join(" | ")
        }
        match self {
            Matcher::Tokens(p) => format!("tokens {}", quoted(p)),
            Matcher::Lines(p) => format!("line contains {}", quoted(p)),
            Matcher::Comments(p) => format!("comment contains {}", quoted(p)),
            Matcher::Check(c) => format!("heuristic: {}", c.description()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub title: String,
    pub category: Category,
    pub severity: Severity,
    pub dimension: Dimension,
    pub remediation_minutes: u32,
    pub suggestion: String,
    /// Impact statement copied onto debt items; `N/A` when none applies.
    pub propagation: String,
    pub languages: Vec<Language>,
    pub scope: Scope,
    pub matcher: Matcher,
    pub builtin: bool,
}

impl Rule {
    pub fn applies_to(&self, language: Language) -> bool {
        self.languages.contains(&language)
    }
}

/// Languages whose streams carry code tokens.
pub const TOKENIZED_LANGUAGES: [Language; 4] =
    [Language::Java, Language::Javascript, Language::GenericCfamily, Language::Html];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule_id: String,
    pub file: String,
    pub line: u32,
    pub severity: Severity,
    pub category: Category,
    pub dimension: Dimension,
    pub message: String,
    pub suggestion: String,
    pub remediation_minutes: u32,
    pub propagation: String,
    /// Trimmed text of the offending line, used for fingerprints.
    pub line_context: String,
}

/// An immutable, id-unique collection of rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn builtin() -> Self {
        RuleSet { rules: builtin_rules() }
    }

    pub fn from_rules(rules: Vec<Rule>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &rules {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::Rules(format!("duplicate rule id `{}`", r.id)));
            }
            if r.remediation_minutes == 0 {
                return Err(Error::Rules(format!("rule `{}`: remediation_minutes must be > 0", r.id)));
            }
        }
        Ok(RuleSet { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    schema_version: Option<u32>,
    #[serde(default, rename = "rule")]
    rules: Vec<RawRule>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    id: String,
    title: Option<String>,
    category: Option<Category>,
    severity: Option<Severity>,
    dimension: Option<Dimension>,
    remediation_minutes: Option<i64>,
    suggestion: Option<String>,
    propagation: Option<String>,
    languages: Option<Vec<String>>,
    scope: Option<Scope>,
    token_pattern: Option<OneOrMany>,
    line_pattern: Option<OneOrMany>,
    comment_pattern: Option<OneOrMany>,
}

fn minutes(id: &str, raw: Option<i64>) -> Result<Option<u32>> {
    match raw {
        None => Ok(None),
        Some(m) if m <= 0 => Err(Error::Rules(format!("rule `{id}`: remediation_minutes must be > 0 (got {m})"))),
        Some(m) => u32::try_from(m)
            .map(Some)
            .map_err(|_| Error::Rules(format!("rule `{id}`: remediation_minutes {m} is too large"))),
    }
}

/// Builtins merged with the rules of a TOML manifest. A manifest entry whose
/// id names a builtin overrides its severity, remediation or suggestion.
pub fn load_rule_set(manifest: &str) -> Result<RuleSet> {
    let manifest: Manifest = toml::from_str(manifest).map_err(|e| Error::Rules(e.message().to_string()))?;
    if let Some(v) = manifest.schema_version {
        if v != MANIFEST_SCHEMA_VERSION {
            return Err(Error::Rules(format!("unsupported schema_version {v} (expected {MANIFEST_SCHEMA_VERSION})")));
        }
    }

    let mut first_entry: BTreeMap<&str, usize> = BTreeMap::new();
    for (n, raw) in manifest.rules.iter().enumerate() {
        if let Some(prev) = first_entry.insert(raw.id.as_str(), n) {
            return Err(Error::Rules(format!(
                "duplicate rule id `{}`: defined by [[rule]] entries #{} and #{}",
                raw.id,
                prev + 1,
                n + 1
            )));
        }
    }

    let mut rules = builtin_rules();
    for raw in manifest.rules {
        match rules.iter_mut().find(|r| r.builtin && r.id == raw.id) {
            Some(rule) => apply_override(rule, raw)?,
            None => rules.push(user_rule(raw)?),
        }
    }
    RuleSet::from_rules(rules)
}

pub fn load_rule_file(path: &Path) -> Result<RuleSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_rule_set(&text)
}

fn apply_override(rule: &mut Rule, raw: RawRule) -> Result<()> {
    let structural = raw.title.is_some()
        || raw.category.is_some()
        || raw.dimension.is_some()
        || raw.propagation.is_some()
        || raw.languages.is_some()
        || raw.scope.is_some()
        || raw.token_pattern.is_some()
        || raw.line_pattern.is_some()
        || raw.comment_pattern.is_some();
    if structural {
        return Err(Error::Rules(format!(
            "rule `{}` is builtin; an override may only set severity, remediation_minutes and suggestion",
            rule.id
        )));
    }
    let explicit = minutes(&rule.id, raw.remediation_minutes)?;
    if let Some(severity) = raw.severity {
        rule.severity = severity;
        rule.remediation_minutes = severity.default_remediation_minutes();
    }
    if let Some(m) = explicit {
        rule.remediation_minutes = m;
    }
    if let Some(s) = raw.suggestion {
        rule.suggestion = s;
    }
    Ok(())
}

fn user_rule(raw: RawRule) -> Result<Rule> {
    let id = raw.id;
    let missing = |field: &str| Error::Rules(format!("rule `{id}`: missing `{field}`"));
    if id.trim().is_empty() {
        return Err(Error::Rules("rule with empty id".to_string()));
    }
    let title = raw.title.clone().ok_or_else(|| missing("title"))?;
    let category = raw.category.ok_or_else(|| missing("category"))?;
    let severity = raw.severity.ok_or_else(|| missing("severity"))?;
    let remediation_minutes = minutes(&id, raw.remediation_minutes)?.unwrap_or(severity.default_remediation_minutes());

    let matchers = [raw.token_pattern, raw.line_pattern, raw.comment_pattern];
    let given = matchers.iter().filter(|m| m.is_some()).count();
    if given != 1 {
        return Err(Error::Rules(format!(
            "rule `{id}`: exactly one of token_pattern, line_pattern, comment_pattern is required"
        )));
    }
    let [tokens, lines, comments] = matchers;
    let matcher = if let Some(p) = tokens {
        let patterns = p
            .into_vec()
            .iter()
            .map(|s| TokenPattern::parse(s))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Rules(format!("rule `{id}`: {e}")))?;
        Matcher::Tokens(patterns)
    } else if let Some(p) = lines {
        Matcher::Lines(non_empty(&id, p.into_vec())?)
    } else {
        Matcher::Comments(non_empty(&id, comments.expect("one matcher present").into_vec())?)
    };

    let languages = match raw.languages {
        Some(names) => names
            .iter()
            .map(|n| Language::parse(n).ok_or_else(|| Error::Rules(format!("rule `{id}`: unknown language `{n}`"))))
            .collect::<Result<Vec<_>>>()?,
        None if matches!(matcher, Matcher::Tokens(_)) => TOKENIZED_LANGUAGES.to_vec(),
        None => all_languages(),
    };

    Ok(Rule {
        title,
        category,
        severity,
        dimension: raw.dimension.unwrap_or(category.default_dimension()),
        remediation_minutes,
        suggestion: raw.suggestion.unwrap_or_default(),
        propagation: raw.propagation.unwrap_or_else(|| "N/A".to_string()),
        languages,
        scope: raw.scope.unwrap_or_default(),
        matcher,
        builtin: false,
        id,
    })
}

fn non_empty(id: &str, patterns: Vec<String>) -> Result<Vec<String>> {
    if patterns.is_empty() || patterns.iter().any(String::is_empty) {
        return Err(Error::Rules(format!("rule `{id}`: empty pattern")));
    }
    Ok(patterns)
}

pub(crate) fn all_languages() -> Vec<Language> {
    vec![
        Language::Java,
        Language::Javascript,
        Language::GenericCfamily,
        Language::Xml,
        Language::Html,
        Language::Css,
        Language::Unknown,
    ]
}

/// Per-file state shared by all matchers.
pub(crate) struct FileView<'a> {
    pub stream: &'a TokenStream,
    pub code: Vec<&'a Token>,
    pub structure: &'a Structure,
    pub lines: Vec<&'a str>,
}

impl FileView<'_> {
    fn in_function(&self, code_index: usize) -> bool {
        self.structure.enclosing_function(code_index).is_some()
    }
}

pub fn apply_rules(stream: &TokenStream, content: &str, rules: &RuleSet) -> Vec<Violation> {
    let structure = analyze_structure(stream);
    apply_rules_with(stream, content, &structure, rules)
}

/// As [`apply_rules`], reusing an already computed structure. Output is sorted by
/// `(file, line, rule_id)` with one violation per such key.
pub fn apply_rules_with(stream: &TokenStream, content: &str, structure: &Structure, rules: &RuleSet) -> Vec<Violation> {
    let view = FileView { stream, code: stream.code_tokens().collect(), structure, lines: content.lines().collect() };
    let mut out: BTreeMap<(u32, &str), Violation> = BTreeMap::new();
    for rule in rules.rules().iter().filter(|r| r.applies_to(stream.language)) {
        for line in matched_lines(rule, &view) {
            out.entry((line, rule.id.as_str())).or_insert_with(|| violation(rule, &view, line));
        }
    }
    out.into_values().collect()
}

fn matched_lines(rule: &Rule, view: &FileView) -> Vec<u32> {
    match &rule.matcher {
        Matcher::Tokens(patterns) => patterns
            .iter()
            .flat_map(|p| p.find_all(&view.code))
            .filter(|&i| rule.scope == Scope::Anywhere || view.in_function(i))
            .map(|i| view.code[i].line)
            .collect(),
        Matcher::Lines(needles) => raw_lines(view, needles),
        Matcher::Comments(needles) if !view.stream.tokenized => raw_lines(view, needles),
        Matcher::Comments(needles) => view
            .stream
            .tokens
            .iter()
            .filter(|t| t.kind.is_comment())
            .flat_map(|t| {
                t.text
                    .lines()
                    .enumerate()
                    .filter(|(_, l)| needles.iter().any(|n| l.contains(n.as_str())))
                    .map(move |(k, _)| t.line + k as u32)
            })
            .collect(),
        Matcher::Check(check) => check.run(view),
    }
}

fn raw_lines(view: &FileView, needles: &[String]) -> Vec<u32> {
    view.lines
        .iter()
        .enumerate()
        .filter(|(_, l)| needles.iter().any(|n| l.contains(n.as_str())))
        .map(|(i, _)| i as u32 + 1)
        .collect()
}

fn violation(rule: &Rule, view: &FileView, line: u32) -> Violation {
    let context = view.lines.get(line as usize - 1).map_or("", |l| l.trim());
    Violation {
        rule_id: rule.id.clone(),
        file: view.stream.file.clone(),
        line,
        severity: rule.severity,
        category: rule.category,
        dimension: rule.dimension,
        message: rule.title.clone(),
        suggestion: rule.suggestion.clone(),
        remediation_minutes: rule.remediation_minutes,
        propagation: rule.propagation.clone(),
        line_context: context.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;

    fn run(src: &str, language: Language, rules: &RuleSet) -> Vec<(String, u32)> {
        apply_rules(&tokenize(src, language), src, rules).into_iter().map(|v| (v.rule_id, v.line)).collect()
    }

    #[test]
    fn empty_manifest_is_builtins() {
        assert_eq!(load_rule_set("").unwrap(), RuleSet::builtin());
        assert_eq!(load_rule_set("schema_version = 1").unwrap(), RuleSet::builtin());
    }

    #[test]
    fn override_builtin_severity() {
        let set = load_rule_set("[[rule]]\nid = \"empty-method\"\nseverity = \"blocker\"\n").unwrap();
        let r = set.get("empty-method").unwrap();
        assert_eq!(r.severity, Severity::Blocker);
        assert_eq!(r.remediation_minutes, 60);
        assert_eq!(set.len(), RuleSet::builtin().len());

        let set = load_rule_set("[[rule]]\nid = \"empty-method\"\nremediation_minutes = 7\n").unwrap();
        assert_eq!(set.get("empty-method").unwrap().remediation_minutes, 7);
        assert!(load_rule_set("[[rule]]\nid = \"empty-method\"\ntoken_pattern = \"x\"\n").is_err());
    }

    #[test]
    fn duplicate_ids_name_the_id() {
        let manifest = r#"
[[rule]]
id = "no-exit"
title = "a"
category = "bug"
severity = "major"
token_pattern = "System . exit ("

[[rule]]
id = "no-exit"
title = "b"
category = "bug"
severity = "minor"
line_pattern = "exit"
"#;
        let err = load_rule_set(manifest).unwrap_err().to_string();
        assert!(err.contains("`no-exit`") && err.contains("#1") && err.contains("#2"), "{err}");
    }

    #[test]
    fn invalid_manifests() {
        let base =
            "[[rule]]\nid = \"x\"\ntitle = \"t\"\ncategory = \"bug\"\nseverity = \"major\"\nline_pattern = \"p\"\n";
        assert!(load_rule_set(base).is_ok());
        assert!(load_rule_set(&format!("{base}remediation_minutes = 0\n")).is_err());
        assert!(load_rule_set(&format!("{base}remediation_minutes = -5\n")).is_err());
        assert!(load_rule_set(&format!("{base}colour = \"red\"\n")).is_err());
        assert!(load_rule_set(&format!("{base}token_pattern = \"a\"\n")).is_err());
        assert!(load_rule_set("schema_version = 2").is_err());
        assert!(load_rule_set("[[rule]]\nid = \"y\"\ncategory = \"bug\"\n").is_err());
    }

    #[test]
    fn user_rules_run_and_default_effort_by_severity() {
        let manifest = r#"
schema_version = 1
[[rule]]
id = "no-exit"
title = "Do not exit the VM"
category = "bug"
severity = "major"
suggestion = "Throw instead."
token_pattern = ["System . exit ( $LIT )", "Runtime . getRuntime ( ) . halt ("]
"#;
        let set = load_rule_set(manifest).unwrap();
        assert_eq!(set.get("no-exit").unwrap().remediation_minutes, 20);
        let src = "class A {\n  void f() {\n    System.exit(1);\n    Runtime.getRuntime().halt(2);\n  }\n}\n";
        assert_eq!(run(src, Language::Java, &set), vec![("no-exit".into(), 3), ("no-exit".into(), 4)]);
    }

    #[test]
    fn one_violation_per_rule_and_line() {
        let src = "void f() { System.out.println(1); System.out.println(2); }";
        let got = run(src, Language::Java, &RuleSet::builtin());
        assert_eq!(got, vec![("stdout-logging".into(), 1)]);
    }

    #[test]
    fn empty_input_has_no_violations() {
        for language in all_languages() {
            assert!(run("", language, &RuleSet::builtin()).is_empty());
        }
    }

    #[test]
    fn line_rules_cover_untokenized_files() {
        let manifest = "[[rule]]\nid = \"no-important\"\ntitle = \"Avoid !important\"\ncategory = \"code_smell\"\nseverity = \"info\"\nline_pattern = \"!important\"\n";
        let set = load_rule_set(manifest).unwrap();
        let css = "a { color: red !important; }\n/* TODO: theme */\n";
        let stream = TokenStream::empty("s.css", Language::Css);
        let got: Vec<_> = apply_rules(&stream, css, &set).into_iter().map(|v| (v.rule_id, v.line)).collect();
        assert_eq!(got, vec![("no-important".into(), 1), ("todo-comment".into(), 2)]);
    }
}
