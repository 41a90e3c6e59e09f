//! Public API documentation coverage.

use serde::{Deserialize, Serialize};

use crate::lexer::{Token, TokenKind, TokenStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApiKind {
    Class,
    Method,
    Field,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiItem {
    pub file: String,
    pub line: u32,
    pub kind: ApiKind,
    pub name: String,
    pub documented: bool,
}

const MODIFIERS: &[&str] = &[
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "protected",
    "private",
];

/// One item per declaration starting with `public`; documented iff a doc
/// comment precedes it with only comments, annotations and modifiers between.
pub fn public_api_documentation(stream: &TokenStream) -> Vec<ApiItem> {
    let tokens = &stream.tokens;
    let mut items = Vec::new();
    let mut doc_pending = false;
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        match t.kind {
            TokenKind::DocComment => doc_pending = true,
            TokenKind::LineComment | TokenKind::BlockComment => {}
            TokenKind::Operator
                if t.text == "@" && next_code(tokens, i).is_some_and(|n| tokens[n].kind == TokenKind::Identifier) =>
            {
                i = skip_annotation(tokens, i);
                continue;
            }
            TokenKind::Keyword if MODIFIERS.contains(&t.text.as_str()) => {}
            TokenKind::Keyword if t.text == "public" => {
                let label = next_code(tokens, i).is_some_and(|n| tokens[n].is_op(":"));
                let base_clause = prev_code(tokens, i).is_some_and(|p| tokens[p].is_op(":") || tokens[p].is_punct(","));
                if !label && !base_clause {
                    if let Some((kind, name)) = declaration(tokens, i) {
                        items.push(ApiItem {
                            file: stream.file.clone(),
                            line: t.line,
                            kind,
                            name,
                            documented: doc_pending,
                        });
                    }
                }
                doc_pending = false;
            }
            _ => doc_pending = false,
        }
        i += 1;
    }
    items
}

fn next_code(tokens: &[Token], i: usize) -> Option<usize> {
    (i + 1..tokens.len()).find(|&k| !tokens[k].kind.is_comment())
}

fn prev_code(tokens: &[Token], i: usize) -> Option<usize> {
    (0..i).rev().find(|&k| !tokens[k].kind.is_comment())
}

/// Index just past `@a.b.Name(args)`.
fn skip_annotation(tokens: &[Token], at: usize) -> usize {
    let Some(name) = next_code(tokens, at) else {
        return tokens.len();
    };
    let mut i = name + 1;
    while let Some(dot) = next_code(tokens, i - 1).filter(|&d| tokens[d].is_op(".")) {
        match next_code(tokens, dot).filter(|&n| tokens[n].kind == TokenKind::Identifier) {
            Some(n) => i = n + 1,
            None => break,
        }
    }
    if let Some(n) = next_code(tokens, i - 1).filter(|&n| tokens[n].is_punct("(")) {
        let mut depth = 0usize;
        for (k, t) in tokens.iter().enumerate().skip(n) {
            if t.is_punct("(") {
                depth += 1;
            } else if t.is_punct(")") {
                depth -= 1;
                if depth == 0 {
                    return k + 1;
                }
            }
        }
        return tokens.len();
    }
    i
}

fn declaration(tokens: &[Token], public_at: usize) -> Option<(ApiKind, String)> {
    let code: Vec<&Token> = tokens[public_at + 1..].iter().filter(|t| !t.kind.is_comment()).collect();
    let mut k = 0;
    while k < code.len() {
        let t = code[k];
        if t.kind == TokenKind::Keyword && MODIFIERS.contains(&t.text.as_str()) {
            k += 1;
        } else if t.is_op("@") && code.get(k + 1).is_some_and(|n| n.kind == TokenKind::Identifier) {
            k += 2;
            while code.get(k).is_some_and(|t| t.is_op(".")) {
                k += 2;
            }
        } else {
            break;
        }
    }
    let head = code.get(k)?;
    let type_kw = head.is_keyword("class") || head.is_keyword("interface") || head.is_keyword("enum");
    let annotation_type = head.is_op("@") && code.get(k + 1).is_some_and(|n| n.is_keyword("interface"));
    let record = head.kind == TokenKind::Identifier
        && head.text == "record"
        && code.get(k + 1).is_some_and(|n| n.kind == TokenKind::Identifier);
    if type_kw || annotation_type || record {
        let offset = if annotation_type { 2 } else { 1 };
        let name = code.get(k + offset).filter(|n| n.kind == TokenKind::Identifier)?;
        return Some((ApiKind::Class, name.text.clone()));
    }
    for j in k..code.len() {
        let t = code[j];
        let kind = if t.is_punct("(") {
            ApiKind::Method
        } else if t.is_op("=") || t.is_punct(";") || t.is_punct(",") {
            ApiKind::Field
        } else if t.is_punct("{") || t.is_punct("}") {
            return None;
        } else {
            continue;
        };
        let name = code[..j].iter().rev().find(|p| p.kind == TokenKind::Identifier)?;
        return Some((kind, name.text.clone()));
    }
    None
}
