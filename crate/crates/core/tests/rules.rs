mod support;

use std::collections::BTreeSet;

use debtscope::ingest::Language;
use debtscope::lexer::tokenize;
use debtscope::rules::{apply_rules, load_rule_set, Category, Dimension, RuleSet, Severity};
use proptest::prelude::*;

use support::rule_fixtures::{cases, hit_lines};

#[test]
fn builtin_fixtures_reproduce_exactly() {
    let rules = RuleSet::builtin();
    let mut failures = Vec::new();
    for case in cases() {
        let got = hit_lines(&case, &rules);
        if got != case.lines {
            failures.push(format!("{} on {}: expected {:?}, got {:?}", case.rule, case.file, case.lines, got));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_builtin_has_positive_and_negative_fixture() {
    let all = cases();
    for rule in RuleSet::builtin().rules() {
        let mine: Vec<_> = all.iter().filter(|c| c.rule == rule.id).collect();
        assert!(mine.iter().any(|c| !c.lines.is_empty()), "{} lacks a positive fixture", rule.id);
        assert!(mine.iter().any(|c| c.lines.is_empty()), "{} lacks a negative fixture", rule.id);
    }
}

#[test]
fn catalog_metadata() {
    let rules = RuleSet::builtin();
    assert!(rules.len() >= 9);
    let ids: BTreeSet<&str> = rules.rules().iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids.len(), rules.len());
    for r in rules.rules() {
        assert!(r.remediation_minutes > 0);
        assert!(!r.suggestion.is_empty(), "{} has no suggestion", r.id);
        if r.id != "todo-comment" {
            assert_eq!(r.dimension, Dimension::CodeDebt, "{}", r.id);
        }
    }
    let expect = |id: &str, category, severity| {
        let r = rules.get(id).unwrap();
        assert_eq!((r.category, r.severity), (category, severity), "{id}");
    };
    expect("empty-method", Category::CodeSmell, Severity::Critical);
    expect("reuse-random", Category::Bug, Severity::Critical);
    expect("generic-exception", Category::CodeSmell, Severity::Major);
    expect("utility-class-public-constructor", Category::CodeSmell, Severity::Major);
    expect("stdout-logging", Category::CodeSmell, Severity::Minor);
    expect("unclosed-resource", Category::Bug, Severity::Blocker);
    expect("file-content-exposure", Category::SecurityHotspot, Severity::Critical);
    expect("dynamic-code-execution", Category::SecurityHotspot, Severity::Blocker);
    expect("todo-comment", Category::CodeSmell, Severity::Minor);
    assert_eq!(rules.get("todo-comment").unwrap().dimension, Dimension::DocumentationDebt);
}

#[test]
fn paper_contexts() {
    let rules = RuleSet::builtin();
    let v = apply_rules(&tokenize("public void f() {}", Language::Java), "public void f() {}", &rules);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].message, "Methods should not be empty");
    assert_eq!(v[0].propagation, "Can cause unexpected behavior in production.");

    let src = "class A { int f() { return new Random().nextInt(); } }";
    let v = apply_rules(&tokenize(src, Language::Java), src, &rules);
    assert_eq!(v.iter().map(|v| v.rule_id.as_str()).collect::<Vec<_>>(), vec!["reuse-random"]);
    assert_eq!(v[0].message, "\"Random\" objects should be reused");

    let src = "class A { void f() { try { g(); } catch (Exception e) { h(e); } } }";
    let v = apply_rules(&tokenize(src, Language::Java), src, &rules);
    assert_eq!(v.iter().map(|v| v.rule_id.as_str()).collect::<Vec<_>>(), vec!["generic-exception"]);
    assert_eq!(v[0].message, "Generic exceptions");
}

const EXTRA_RULES: &[&str] = &[
    "[[rule]]\nid = \"u-ret\"\ntitle = \"r\"\ncategory = \"code_smell\"\nseverity = \"info\"\ntoken_pattern = \"return $ID ;\"\n",
    "[[rule]]\nid = \"u-if\"\ntitle = \"i\"\ncategory = \"bug\"\nseverity = \"major\"\ntoken_pattern = \"if ( ... )\"\n",
    "[[rule]]\nid = \"u-line\"\ntitle = \"l\"\ncategory = \"vulnerability\"\nseverity = \"blocker\"\nline_pattern = \"x\"\n",
];

fn java_snippet() -> impl Strategy<Value = String> {
    let stmt = prop::sample::select(vec![
        "System.out.println(x);",
        "if (x > 1) { return y; }",
        "Random r = new Random();",
        "try { f(); } catch (Exception e) { }",
        "// TODO later",
        "int x = 3;",
        "eval(code);",
        "String pwd = \"p\";",
    ]);
    prop::collection::vec(stmt, 0..12)
        .prop_map(|stmts| format!("class A {{\n void m() {{\n{}\n }}\n}}\n", stmts.join("\n")))
}

proptest! {
    #[test]
    fn adding_rules_never_removes_violations(src in java_snippet(), extra in prop::sample::subsequence(EXTRA_RULES.to_vec(), 0..=3)) {
        let stream = tokenize(&src, Language::Java);
        let base: BTreeSet<_> = apply_rules(&stream, &src, &RuleSet::builtin())
            .into_iter().map(|v| (v.rule_id, v.line)).collect();
        let bigger = load_rule_set(&extra.concat()).unwrap();
        let more: BTreeSet<_> = apply_rules(&stream, &src, &bigger)
            .into_iter().map(|v| (v.rule_id, v.line)).collect();
        prop_assert!(base.is_subset(&more));
    }

    #[test]
    fn output_is_sorted_and_unique(src in java_snippet()) {
        let v = apply_rules(&tokenize(&src, Language::Java), &src, &RuleSet::builtin());
        let keys: Vec<_> = v.iter().map(|v| (v.line, v.rule_id.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(keys, sorted);
    }
}
