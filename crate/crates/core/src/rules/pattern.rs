//! Token-sequence patterns.
//!
//! A pattern is a whitespace-separated list of elements matched against code
//! tokens (comments are invisible):
//!
//! * a lexeme such as `new`, `(` or `Random` matches a token with that text;
//!   `a|b|c` matches any of the alternatives,
//! * `$ID` matches one identifier, `$LIT` one string/char/number literal,
//!   `$ANY` any single token,
//! * `...` skips zero or more tokens lazily but never crosses `;`, `{` or `}`.

use std::fmt;

use crate::lexer::{Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Element {
    Lexeme(Vec<String>),
    Ident,
    Literal,
    Any,
    Gap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenPattern {
    source: String,
    elements: Vec<Element>,
}

impl TokenPattern {
    pub fn parse(source: &str) -> Result<Self, String> {
        let mut elements = Vec::new();
        for word in source.split_whitespace() {
            let element = match word {
                "$ID" => Element::Ident,
                "$LIT" => Element::Literal,
                "$ANY" => Element::Any,
                "..." => {
                    if elements.last() == Some(&Element::Gap) {
                        return Err(format!("pattern `{source}`: consecutive `...`"));
                    }
                    Element::Gap
                }
                w => {
                    let alternatives: Vec<&str> = w.split('|').collect();
                    if alternatives.len() > 1 && alternatives.iter().all(|a| !a.is_empty()) {
                        Element::Lexeme(alternatives.into_iter().map(str::to_string).collect())
                    } else {
                        Element::Lexeme(vec![w.to_string()])
                    }
                }
            };
            elements.push(element);
        }
        match (elements.first(), elements.last()) {
            (None, _) => Err("empty token pattern".to_string()),
            (Some(Element::Gap), _) | (_, Some(Element::Gap)) => {
                Err(format!("pattern `{source}`: `...` must sit between two elements"))
            }
            _ => Ok(TokenPattern { source: source.to_string(), elements }),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    /// Start indices (into `code`) of every position where the pattern matches.
    pub fn find_all(&self, code: &[&Token]) -> Vec<usize> {
        (0..code.len()).filter(|&i| self.matches_at(code, i).is_some()).collect()
    }

    /// End index (exclusive) of the shortest match starting at `start`.
    pub fn matches_at(&self, code: &[&Token], start: usize) -> Option<usize> {
        match_from(&self.elements, code, start)
    }
}

impl fmt::Display for TokenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn single(element: &Element, t: &Token) -> bool {
    match element {
        Element::Lexeme(alts) => alts.contains(&t.text),
        Element::Ident => t.kind == TokenKind::Identifier,
        Element::Literal => t.kind.is_literal(),
        Element::Any => true,
        Element::Gap => unreachable!("gaps are handled by the matcher"),
    }
}

fn is_barrier(t: &Token) -> bool {
    t.is_punct(";") || t.is_punct("{") || t.is_punct("}")
}

fn match_from(elements: &[Element], code: &[&Token], at: usize) -> Option<usize> {
    let Some((first, rest)) = elements.split_first() else {
        return Some(at);
    };
    if *first == Element::Gap {
        let mut k = at;
        loop {
            if let Some(end) = match_from(rest, code, k) {
                return Some(end);
            }
            if k >= code.len() || is_barrier(code[k]) {
                return None;
            }
            k += 1;
        }
    }
    let t = code.get(at)?;
    if single(first, t) {
        match_from(rest, code, at + 1)
    } else {
        None
    }
}
