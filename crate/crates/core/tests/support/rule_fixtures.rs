//! The committed builtin-rule fixtures and their expected hit lines.

use std::path::PathBuf;

use debtscope::ingest::Language;
use debtscope::lexer::tokenize;
use debtscope::rules::{apply_rules, RuleSet};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct Case {
    pub rule: String,
    pub file: String,
    pub lines: Vec<u32>,
}

#[derive(Deserialize)]
struct Table {
    case: Vec<Case>,
}

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/rules")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(dir().join("expected.toml")).expect("expected.toml");
    toml::from_str::<Table>(&text).expect("expected.toml parses").case
}

/// Lines on which `case.rule` fires for the case's file.
pub fn hit_lines(case: &Case, rules: &RuleSet) -> Vec<u32> {
    let content = std::fs::read_to_string(dir().join(&case.file)).expect("fixture readable");
    let mut stream = tokenize(&content, Language::from_path(&case.file));
    stream.file = case.file.clone();
    apply_rules(&stream, &content, rules).into_iter().filter(|v| v.rule_id == case.rule).map(|v| v.line).collect()
}
