//! Package dependency graph from `package`/`import` declarations (Java) and
//! relative module imports (JavaScript and HTML script blocks, where the
//! directory is the package).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ingest::Language;
use crate::lexer::{Token, TokenKind, TokenStream};

pub const DEFAULT_PACKAGE: &str = "<default>";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PackageEdge {
    pub from: String,
    pub to: String,
    pub weight: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageGraph {
    pub packages: BTreeSet<String>,
    /// Sorted by `(from, to)`.
    pub edges: Vec<PackageEdge>,
}

impl PackageGraph {
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileImports {
    pub file: String,
    pub package: String,
    pub imports: BTreeSet<String>,
}

pub fn file_imports(stream: &TokenStream) -> FileImports {
    let code: Vec<&Token> = stream.code_tokens().collect();
    match stream.language {
        Language::Javascript | Language::Html => js_imports(&stream.file, &code),
        _ => java_imports(&stream.file, &code),
    }
}

/// Edges only count imports of packages declared somewhere in the project;
/// intra-package imports are dropped.
pub fn build_package_graph(streams: &[TokenStream]) -> PackageGraph {
    let per_file: Vec<FileImports> = streams.iter().filter(|s| s.tokenized).map(file_imports).collect();
    merge_imports(&per_file)
}

pub fn merge_imports(per_file: &[FileImports]) -> PackageGraph {
    let packages: BTreeSet<String> = per_file.iter().map(|f| f.package.clone()).collect();
    let mut edges: BTreeMap<(String, String), u64> = BTreeMap::new();
    for f in per_file {
        for target in &f.imports {
            if *target != f.package && packages.contains(target) {
                *edges.entry((f.package.clone(), target.clone())).or_default() += 1;
            }
        }
    }
    PackageGraph {
        packages,
        edges: edges.into_iter().map(|((from, to), weight)| PackageEdge { from, to, weight }).collect(),
    }
}

fn dotted_until_semicolon(code: &[&Token], from: usize) -> Vec<String> {
    code[from..]
        .iter()
        .take_while(|t| !t.is_punct(";"))
        .filter(|t| t.kind == TokenKind::Identifier || t.is_op("*") || t.kind == TokenKind::Keyword)
        .map(|t| t.text.clone())
        .collect()
}

fn java_imports(file: &str, code: &[&Token]) -> FileImports {
    let mut package = DEFAULT_PACKAGE.to_string();
    let mut imports = BTreeSet::new();
    for (i, t) in code.iter().enumerate() {
        if t.is_keyword("package") {
            let parts = dotted_until_semicolon(code, i + 1);
            if !parts.is_empty() {
                package = parts.join(".");
            }
        } else if t.is_keyword("import") {
            let mut parts = dotted_until_semicolon(code, i + 1);
            if parts.first().is_some_and(|p| p == "static") {
                parts.remove(0);
            }
            if let Some(p) = imported_package(&parts) {
                imports.insert(p);
            }
        }
    }
    FileImports { file: file.to_string(), package, imports }
}

/// The package prefix of an import: segments before the first capitalised
/// (type) segment, or before a trailing `*`.
fn imported_package(parts: &[String]) -> Option<String> {
    let end = parts
        .iter()
        .position(|p| p == "*" || p.chars().next().is_some_and(char::is_uppercase))
        .unwrap_or(parts.len().saturating_sub(1));
    (end > 0).then(|| parts[..end].join("."))
}

fn directory_of(path: &str) -> String {
    match path.rsplit_once('/') {
        Some((dir, _)) => dir.to_string(),
        None => ".".to_string(),
    }
}

fn js_imports(file: &str, code: &[&Token]) -> FileImports {
    let package = directory_of(file);
    let mut imports = BTreeSet::new();
    for (i, t) in code.iter().enumerate() {
        if t.kind != TokenKind::StringLiteral || i == 0 {
            continue;
        }
        let prev = code[i - 1];
        let is_module_ref = (prev.kind == TokenKind::Identifier && prev.text == "from")
            || prev.is_keyword("import")
            || (prev.is_punct("(")
                && i >= 2
                && (code[i - 2].is_keyword("import")
                    || (code[i - 2].kind == TokenKind::Identifier && code[i - 2].text == "require")));
        if !is_module_ref {
            continue;
        }
        let spec = t.text.trim_matches(|c| c == '"' || c == '\'' || c == '`');
        if let Some(target) = resolve_relative(&package, spec) {
            imports.insert(directory_of(&target));
        }
    }
    FileImports { file: file.to_string(), package, imports }
}

/// Resolve `./x` / `../x` against `dir`; bare module names are external.
fn resolve_relative(dir: &str, spec: &str) -> Option<String> {
    if !(spec.starts_with("./") || spec.starts_with("../")) {
        return None;
    }
    let mut parts: Vec<&str> = if dir == "." { Vec::new() } else { dir.split('/').collect() };
    for seg in spec.split('/') {
        match seg {
            "" | "." => {}
            ".." => {
                parts.pop()?;
            }
            s => parts.push(s),
        }
    }
    Some(parts.join("/"))
}
