//! Token-level complexity rules.
//!
//! Cyclomatic: 1 + one per `if`, `for`, `while`, `case`, `catch`, `&&`, `||`
//! and ternary `?`.
//!
//! Cognitive (simplified nesting-weighted score): `if`, `for`, `while`,
//! `catch` and `switch` add 1 + the current nesting depth; each `else`, `&&`
//! and `||` adds 1. Depth counts the braces opened by those structures (and
//! by `else` / `do`), starting at 0 at the top of the function body.

use std::borrow::Borrow;
use std::collections::HashSet;

use crate::lexer::{Token, TokenKind};

const CYCLOMATIC_KEYWORDS: &[&str] = &["if", "for", "while", "case", "catch"];
const NESTING_KEYWORDS: &[&str] = &["if", "for", "while", "catch", "switch"];

pub fn cyclomatic_complexity<T: Borrow<Token>>(tokens: &[T]) -> u32 {
    let mut score = 1;
    for (i, t) in tokens.iter().enumerate() {
        let t = t.borrow();
        match t.kind {
            TokenKind::Keyword if CYCLOMATIC_KEYWORDS.contains(&t.text.as_str()) => score += 1,
            TokenKind::Operator if t.text == "&&" || t.text == "||" => score += 1,
            TokenKind::Operator if t.text == "?" && !is_generic_wildcard(tokens, i) => score += 1,
            _ => {}
        }
    }
    score
}

/// `?` in `List<? extends T>` or `Map<K, ?>`.
fn is_generic_wildcard<T: Borrow<Token>>(tokens: &[T], i: usize) -> bool {
    let prev = i.checked_sub(1).map(|p| tokens[p].borrow());
    let next = tokens.get(i + 1).map(Borrow::borrow);
    let prev_ok = prev.is_some_and(|p| p.is_op("<") || p.is_punct(","));
    let next_ok = next.is_some_and(|n| {
        n.is_keyword("extends")
            || n.is_keyword("super")
            || n.is_punct(",")
            || n.kind == TokenKind::Operator && n.text.starts_with('>')
    });
    prev_ok && next_ok
}

pub fn cognitive_complexity<T: Borrow<Token>>(tokens: &[T]) -> u32 {
    let nesting = nesting_braces(tokens);
    let mut depth_stack: Vec<bool> = Vec::new();
    let mut depth = 0u32;
    let mut score = 0;
    for (i, t) in tokens.iter().enumerate() {
        let t = t.borrow();
        match t.kind {
            TokenKind::Keyword if NESTING_KEYWORDS.contains(&t.text.as_str()) => score += 1 + depth,
            TokenKind::Keyword if t.text == "else" => score += 1,
            TokenKind::Operator if t.text == "&&" || t.text == "||" => score += 1,
            TokenKind::Punctuation if t.text == "{" => {
                let nests = nesting.contains(&i);
                depth_stack.push(nests);
                depth += nests as u32;
            }
            TokenKind::Punctuation if t.text == "}" => depth -= depth_stack.pop().unwrap_or(false) as u32,
            _ => {}
        }
    }
    score
}

/// Indices of `{` tokens that open the body of a nesting structure.
fn nesting_braces<T: Borrow<Token>>(tokens: &[T]) -> HashSet<usize> {
    let mut out = HashSet::new();
    for (i, t) in tokens.iter().enumerate() {
        let t = t.borrow();
        if t.is_keyword("else") || t.is_keyword("do") {
            if tokens.get(i + 1).is_some_and(|n| n.borrow().is_punct("{")) {
                out.insert(i + 1);
            }
        } else if t.kind == TokenKind::Keyword && NESTING_KEYWORDS.contains(&t.text.as_str()) {
            if !tokens.get(i + 1).is_some_and(|n| n.borrow().is_punct("(")) {
                continue;
            }
            if let Some(close) = matching_paren(tokens, i + 1) {
                if tokens.get(close + 1).is_some_and(|n| n.borrow().is_punct("{")) {
                    out.insert(close + 1);
                }
            }
        }
    }
    out
}

fn matching_paren<T: Borrow<Token>>(tokens: &[T], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (k, t) in tokens.iter().enumerate().skip(open) {
        let t = t.borrow();
        if t.is_punct("(") {
            depth += 1;
        } else if t.is_punct(")") {
            depth -= 1;
            if depth == 0 {
                return Some(k);
            }
        }
    }
    None
}
