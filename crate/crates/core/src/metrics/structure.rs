//! Function and class extraction by brace matching over code tokens.

use crate::ingest::Language;
use crate::lexer::{Token, TokenKind, TokenStream};

use super::complexity::{cognitive_complexity, cyclomatic_complexity};
use super::{ClassSpan, FunctionSpan};

pub(crate) const ANONYMOUS: &str = "<anonymous>";

pub(crate) struct Pairs {
    /// Closer index for each opener; unclosed openers map to `code.len()`.
    pub close_of: Vec<Option<usize>>,
    pub open_of: Vec<Option<usize>>,
    pub unclosed: usize,
    pub stray: usize,
}

pub(crate) fn match_pairs(code: &[&Token], open: &str, close: &str) -> Pairs {
    let mut close_of = vec![None; code.len()];
    let mut open_of = vec![None; code.len()];
    let mut stack = Vec::new();
    let mut stray = 0;
    for (i, t) in code.iter().enumerate() {
        if t.is_punct(open) {
            stack.push(i);
        } else if t.is_punct(close) {
            match stack.pop() {
                Some(o) => {
                    close_of[o] = Some(i);
                    open_of[i] = Some(o);
                }
                None => stray += 1,
            }
        }
    }
    let unclosed = stack.len();
    for o in stack {
        close_of[o] = Some(code.len());
    }
    Pairs { close_of, open_of, unclosed, stray }
}

pub(crate) fn line_at(code: &[&Token], index: usize) -> u32 {
    match code.get(index) {
        Some(t) => t.line,
        None => code.last().map_or(1, |t| t.end_line()),
    }
}

#[derive(Debug, Clone)]
struct Body {
    name: String,
    name_index: usize,
    open: usize,
    close: usize,
}

/// Functions and classes of one file.
#[derive(Debug, Clone, Default)]
pub struct Structure {
    pub functions: Vec<FunctionSpan>,
    pub classes: Vec<ClassSpan>,
    pub diagnostics: Vec<String>,
    /// Code-token ranges `(open brace, close brace)` aligned with `functions`.
    pub bodies: Vec<(usize, usize)>,
    /// Code-token ranges aligned with `classes`.
    pub class_bodies: Vec<(usize, usize)>,
}

impl Structure {
    /// Innermost reported function whose body contains code token `index`.
    pub fn enclosing_function(&self, index: usize) -> Option<usize> {
        self.bodies
            .iter()
            .enumerate()
            .filter(|(_, &(open, close))| open < index && index < close)
            .max_by_key(|(_, &(open, _))| open)
            .map(|(i, _)| i)
    }
}

pub fn analyze_structure(stream: &TokenStream) -> Structure {
    let code: Vec<&Token> = stream.code_tokens().collect();
    analyze_code(&stream.file, stream.language, &code)
}

pub(crate) fn analyze_code(file: &str, language: Language, code: &[&Token]) -> Structure {
    let mut out = Structure::default();
    let braces = match_pairs(code, "{", "}");
    let parens = match_pairs(code, "(", ")");
    if braces.unclosed > 0 {
        out.diagnostics.push(format!("{file}: {} unclosed brace(s); spans closed at end of file", braces.unclosed));
    }
    if braces.stray > 0 {
        out.diagnostics.push(format!("{file}: {} unmatched closing brace(s)", braces.stray));
    }

    let js = language == Language::Javascript;
    let mut bodies: Vec<Body> = Vec::new();
    for (b, t) in code.iter().enumerate() {
        if !t.is_punct("{") {
            continue;
        }
        if let Some((name, name_index)) = function_header(code, b, &parens.open_of, js) {
            let close = braces.close_of[b].unwrap_or(code.len());
            // Java and C-like: bodies nested in another body belong to the enclosing function.
            if !js && bodies.iter().any(|k| k.open < b && b < k.close) {
                continue;
            }
            bodies.push(Body { name, name_index, open: b, close });
        }
    }

    for (i, body) in bodies.iter().enumerate() {
        let nested: Vec<(usize, usize)> = bodies
            .iter()
            .enumerate()
            .filter(|&(j, o)| j != i && body.open < o.open && o.open < body.close)
            .map(|(_, o)| (o.name_index.min(o.open), o.close))
            .collect();
        let tokens: Vec<&Token> = (body.open + 1..body.close)
            .filter(|&k| !nested.iter().any(|&(s, e)| s <= k && k <= e))
            .map(|k| code[k])
            .collect();
        out.functions.push(FunctionSpan {
            file: file.to_string(),
            name: body.name.clone(),
            start_line: line_at(code, body.name_index),
            end_line: line_at(code, body.close),
            cyclomatic: cyclomatic_complexity(&tokens),
            cognitive: cognitive_complexity(&tokens),
        });
        out.bodies.push((body.open, body.close));
    }

    for (name, name_index, open) in class_headers(code) {
        let close = braces.close_of[open].unwrap_or(code.len());
        out.classes.push(ClassSpan {
            file: file.to_string(),
            name,
            start_line: line_at(code, name_index),
            end_line: line_at(code, close),
            total_complexity: 0,
            member_functions: 0,
        });
        out.class_bodies.push((open, close));
    }
    for (f, &(open, _)) in out.bodies.iter().enumerate() {
        let owner = out
            .class_bodies
            .iter()
            .enumerate()
            .filter(|(_, &(co, cc))| co < open && open < cc)
            .max_by_key(|(_, &(co, _))| co)
            .map(|(c, _)| c);
        if let Some(c) = owner {
            out.classes[c].total_complexity += out.functions[f].cyclomatic;
            out.classes[c].member_functions += 1;
        }
    }
    out
}

/// Whether the `{` at `brace` opens a function body; returns the name and the
/// index of the token that names (or starts) the function.
fn function_header(
    code: &[&Token],
    brace: usize,
    open_of_paren: &[Option<usize>],
    js: bool,
) -> Option<(String, usize)> {
    let mut j = brace.checked_sub(1)?;
    if let Some(t) = throws_clause_start(code, brace) {
        j = t.checked_sub(1)?;
    }
    if code[j].is_keyword("const") && j > 0 {
        j -= 1;
    }
    let t = code[j];
    if js && t.is_op("=>") {
        let p = j.checked_sub(1)?;
        let start = if code[p].is_punct(")") { open_of_paren[p]? } else { p };
        return Some((ANONYMOUS.to_string(), start));
    }
    if !t.is_punct(")") {
        return None;
    }
    let open = open_of_paren[j]?;
    let before = open.checked_sub(1)?;
    let n = code[before];
    match n.kind {
        TokenKind::Identifier => {
            if before > 0 && code[before - 1].is_keyword("new") {
                return None;
            }
            Some((n.text.clone(), before))
        }
        TokenKind::Keyword if n.text == "function" => Some((ANONYMOUS.to_string(), before)),
        _ => None,
    }
}

/// Index of a `throws` keyword directly preceding `brace` (Java `throws A, b.C`).
fn throws_clause_start(code: &[&Token], brace: usize) -> Option<usize> {
    let mut k = brace;
    while k > 0 {
        k -= 1;
        let t = code[k];
        if t.is_keyword("throws") {
            return Some(k);
        }
        let part_of_list =
            t.kind == TokenKind::Identifier || t.is_op(".") || t.is_punct(",") || t.is_op("<") || t.is_op(">");
        if !part_of_list {
            return None;
        }
    }
    None
}

/// `(name, name_index, open_brace)` for every class, interface and enum declaration.
fn class_headers(code: &[&Token]) -> Vec<(String, usize, usize)> {
    let mut out = Vec::new();
    for (i, t) in code.iter().enumerate() {
        let is_type_kw = t.is_keyword("class") || t.is_keyword("interface") || t.is_keyword("enum");
        if !is_type_kw || (i > 0 && code[i - 1].is_op(".")) {
            continue;
        }
        if t.is_keyword("enum") && code.get(i + 1).is_some_and(|n| n.is_keyword("class")) {
            continue;
        }
        let (name, name_index) = match code.get(i + 1) {
            Some(n) if n.kind == TokenKind::Identifier => (n.text.clone(), i + 1),
            _ => (ANONYMOUS.to_string(), i),
        };
        let open =
            code[i + 1..].iter().position(|t| t.is_punct("{") || t.is_punct(";") || t.is_punct("}")).map(|p| p + i + 1);
        if let Some(open) = open.filter(|&o| code[o].is_punct("{")) {
            out.push((name, name_index, open));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;

    fn structure(src: &str, language: Language) -> Structure {
        analyze_structure(&tokenize(src, language))
    }

    fn names(s: &Structure) -> Vec<&str> {
        s.functions.iter().map(|f| f.name.as_str()).collect()
    }

    #[test]
    fn single_function() {
        let s = structure("void f() {}", Language::Java);
        assert_eq!(names(&s), vec!["f"]);
        assert_eq!(s.functions[0].cyclomatic, 1);
    }

    #[test]
    fn control_keywords_are_not_functions() {
        let s = structure("if (x) { } while (y) {} switch (z) {} catch (e) {} for (;;) {}", Language::Java);
        assert!(s.functions.is_empty());
    }

    #[test]
    fn java_lambda_and_anonymous_class_belong_to_method() {
        let src = "class A {\n  void run() {\n    list.forEach(x -> { if (x) y(); });\n    new Thread() { public void run() { if (a) b(); } };\n  }\n}\n";
        let s = structure(src, Language::Java);
        assert_eq!(names(&s), vec!["run"]);
        assert_eq!(s.functions[0].cyclomatic, 3);
        assert_eq!(s.functions[0].start_line, 2);
        assert_eq!(s.functions[0].end_line, 5);
        assert_eq!(s.classes.len(), 1);
        assert_eq!(s.classes[0].member_functions, 1);
        assert_eq!(s.classes[0].total_complexity, 3);
    }

    #[test]
    fn js_nested_functions_are_separate() {
        let src = "function outer(a) {\n  if (a) {}\n  var f = function () { if (b) {} };\n  items.map((x) => { while (x) {} });\n}\n";
        let s = structure(src, Language::Javascript);
        assert_eq!(names(&s), vec!["outer", ANONYMOUS, ANONYMOUS]);
        assert_eq!(s.functions.iter().map(|f| f.cyclomatic).collect::<Vec<_>>(), vec![2, 2, 2]);
    }

    #[test]
    fn throws_clause_and_constructor() {
        let src = "class B { B(int x) throws IOException, java.io.Foo { go(); } }";
        let s = structure(src, Language::Java);
        assert_eq!(names(&s), vec!["B"]);
    }

    #[test]
    fn unbalanced_braces_close_at_eof() {
        let s = structure("void f() {\n  if (x) {\n", Language::Java);
        assert_eq!(names(&s), vec!["f"]);
        assert_eq!(s.functions[0].end_line, 2);
        assert_eq!(s.diagnostics.len(), 1);
    }

    #[test]
    fn class_literal_is_not_a_class() {
        let s = structure("void f() { Object o = Foo.class; }", Language::Java);
        assert!(s.classes.is_empty());
    }
}
