//! Structural metrics consumed by the cost model.

mod api;
mod complexity;
mod packages;
pub(crate) mod structure;

use serde::{Deserialize, Serialize};

use crate::lexer::{Token, TokenStream};

pub use api::{public_api_documentation, ApiItem, ApiKind};
pub use complexity::{cognitive_complexity, cyclomatic_complexity};
pub use packages::{
    build_package_graph, file_imports, merge_imports, FileImports, PackageEdge, PackageGraph, DEFAULT_PACKAGE,
};
pub use structure::{analyze_structure, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSpan {
    pub file: String,
    /// Identifier, or `<anonymous>`.
    pub name: String,
    pub start_line: u32,
    pub end_line: u32,
    pub cyclomatic: u32,
    pub cognitive: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpan {
    pub file: String,
    pub name: String,
    pub start_line: u32,
    pub end_line: u32,
    /// Sum of member cyclomatic complexity.
    pub total_complexity: u32,
    pub member_functions: u32,
}

pub fn extract_functions(stream: &TokenStream) -> Vec<FunctionSpan> {
    analyze_structure(stream).functions
}

/// `;` tokens outside `for (...)` headers, plus one per `if`, `for`, `while`,
/// `switch` and `try`.
pub fn count_statements(stream: &TokenStream) -> u64 {
    let code: Vec<&Token> = stream.code_tokens().collect();
    let mut count = 0;
    // paren depth at which each open for-header started
    let mut for_headers: Vec<usize> = Vec::new();
    let mut depth = 0usize;
    let mut header_pending = false;
    for t in &code {
        if t.is_punct("(") {
            depth += 1;
            if header_pending {
                for_headers.push(depth);
                header_pending = false;
            }
        } else if t.is_punct(")") {
            if for_headers.last() == Some(&depth) {
                for_headers.pop();
            }
            depth = depth.saturating_sub(1);
        } else if t.is_punct(";") {
            if for_headers.is_empty() {
                count += 1;
            }
        } else if ["if", "for", "while", "switch", "try"].iter().any(|k| t.is_keyword(k)) {
            count += 1;
            header_pending = t.is_keyword("for");
        } else {
            header_pending = false;
        }
    }
    count
}

/// Everything the debt model needs from one tokenized file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FileMetrics {
    pub functions: Vec<FunctionSpan>,
    pub classes: Vec<ClassSpan>,
    pub statements: u64,
    pub api_items: Vec<ApiItem>,
    pub diagnostics: Vec<String>,
}

pub fn analyze_file(stream: &TokenStream, structure: &Structure) -> FileMetrics {
    let mut diagnostics = structure.diagnostics.clone();
    diagnostics.extend(stream.diagnostics.iter().map(|d| format!("{}:{}: {}", stream.file, d.line, d.message)));
    FileMetrics {
        functions: structure.functions.clone(),
        classes: structure.classes.clone(),
        statements: count_statements(stream),
        api_items: public_api_documentation(stream),
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Language;
    use crate::lexer::tokenize;

    fn stmts(src: &str) -> u64 {
        count_statements(&tokenize(src, Language::Java))
    }

    #[test]
    fn statement_examples() {
        assert_eq!(stmts("int a = 1; a++;"), 2);
        assert_eq!(stmts(""), 0);
        assert_eq!(stmts("for(i=0;i<n;i++){x();}"), 2);
        assert_eq!(stmts("if (a) { b(); } else { while (c) d(); }"), 4);
        assert_eq!(stmts("for (int i = f(a, b); i < n; i++) for (;;) { y(); }"), 3);
        assert_eq!(stmts("try { a(); } catch (E e) { }"), 2);
    }

    #[test]
    fn function_examples() {
        let f = extract_functions(&tokenize("void f() {}", Language::Java));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].name, "f");
        assert!(extract_functions(&tokenize("if (x) { }", Language::Java)).is_empty());
    }
}
