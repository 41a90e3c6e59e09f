//! Shared C-family tokenizer (Java, JavaScript, C-like and JSP scriptlets).
//!
//! The lexer is lossless: token lexemes plus the skipped whitespace reproduce
//! the input byte-for-byte. Comments are kept as trivia tokens.

use serde::{Deserialize, Serialize};

use crate::ingest::{Language, SourceFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Identifier,
    Keyword,
    StringLiteral,
    CharLiteral,
    Number,
    Operator,
    Punctuation,
    DocComment,
    LineComment,
    BlockComment,
}

impl TokenKind {
    pub fn is_comment(self) -> bool {
        matches!(self, TokenKind::DocComment | TokenKind::LineComment | TokenKind::BlockComment)
    }

    pub fn is_literal(self) -> bool {
        matches!(self, TokenKind::StringLiteral | TokenKind::CharLiteral | TokenKind::Number)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based.
    pub line: u32,
    /// 1-based, counted in characters.
    pub column: u32,
    /// Byte offset of the lexeme in the source text.
    pub offset: usize,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.is(TokenKind::Keyword, text)
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punctuation, text)
    }

    pub fn is_op(&self, text: &str) -> bool {
        self.is(TokenKind::Operator, text)
    }

    /// Line of the last character of the lexeme (multi-line comments and templates).
    pub fn end_line(&self) -> u32 {
        self.line + self.text.matches('\n').count() as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub file: String,
    pub language: Language,
    pub tokens: Vec<Token>,
    /// False for languages the lexer does not handle (the stream is then empty).
    pub tokenized: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl TokenStream {
    pub fn empty(file: &str, language: Language) -> Self {
        TokenStream {
            file: file.to_string(),
            language,
            tokens: Vec::new(),
            tokenized: language.is_cfamily(),
            diagnostics: Vec::new(),
        }
    }

    /// Tokens with comments removed.
    pub fn code_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| !t.kind.is_comment())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizeMode {
    Exact,
    IdentBlind,
}

pub const ID_PLACEHOLDER: &str = "$ID";
pub const LIT_PLACEHOLDER: &str = "$LIT";

const JAVA_KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "false",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "null",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "true",
    "try",
    "void",
    "volatile",
    "while",
];

const JS_KEYWORDS: &[&str] = &[
    "async",
    "await",
    "break",
    "case",
    "catch",
    "class",
    "const",
    "continue",
    "debugger",
    "default",
    "delete",
    "do",
    "else",
    "export",
    "extends",
    "false",
    "finally",
    "for",
    "function",
    "if",
    "import",
    "in",
    "instanceof",
    "let",
    "new",
    "null",
    "return",
    "static",
    "super",
    "switch",
    "this",
    "throw",
    "true",
    "try",
    "typeof",
    "var",
    "void",
    "while",
    "with",
    "yield",
];

const C_EXTRA_KEYWORDS: &[&str] = &[
    "auto",
    "bool",
    "delete",
    "extern",
    "friend",
    "inline",
    "namespace",
    "operator",
    "register",
    "signed",
    "sizeof",
    "struct",
    "template",
    "typedef",
    "typename",
    "union",
    "unsigned",
    "using",
    "virtual",
];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dialect {
    Java,
    Javascript,
    Generic,
}

impl Dialect {
    fn is_keyword(self, word: &str) -> bool {
        match self {
            Dialect::Java => JAVA_KEYWORDS.contains(&word),
            Dialect::Javascript => JS_KEYWORDS.contains(&word),
            Dialect::Generic => JAVA_KEYWORDS.contains(&word) || C_EXTRA_KEYWORDS.contains(&word),
        }
    }
}

fn dialect_of(language: Language) -> Option<Dialect> {
    match language {
        Language::Java => Some(Dialect::Java),
        Language::Javascript => Some(Dialect::Javascript),
        Language::GenericCfamily => Some(Dialect::Generic),
        _ => None,
    }
}

/// Tokenize a whole C-family text. Non C-family languages yield an empty
/// stream with `tokenized == false`.
pub fn tokenize(content: &str, language: Language) -> TokenStream {
    tokenize_named("", content, language)
}

/// Tokenize a scanned file: template files (JSP, HTML) only contribute their
/// `<% %>` scriptlets and `<script>` blocks.
pub fn tokenize_file(file: &SourceFile, content: &str) -> TokenStream {
    if file.is_template() {
        tokenize_template(&file.path, content, file.language)
    } else {
        tokenize_named(&file.path, content, file.language)
    }
}

fn tokenize_named(file: &str, content: &str, language: Language) -> TokenStream {
    let mut stream = TokenStream::empty(file, language);
    let Some(dialect) = dialect_of(language) else {
        return stream;
    };
    let lines = LineIndex::new(content);
    let mut lexer = Lexer::new(content, &lines, dialect, 0, content.len());
    lexer.run();
    stream.tokens = lexer.tokens;
    stream.diagnostics = lexer.diagnostics;
    stream
}

fn tokenize_template(file: &str, content: &str, language: Language) -> TokenStream {
    let mut stream = TokenStream::empty(file, language);
    stream.tokenized = true;
    let lines = LineIndex::new(content);
    for (start, end, dialect) in template_regions(content, language != Language::Html) {
        let mut lexer = Lexer::new(content, &lines, dialect, start, end);
        lexer.run();
        stream.tokens.extend(lexer.tokens);
        stream.diagnostics.extend(lexer.diagnostics);
    }
    stream
}

/// Byte ranges of embedded code: JSP scriptlets (Java) and script elements (JavaScript).
fn template_regions(content: &str, scriptlets: bool) -> Vec<(usize, usize, Dialect)> {
    let lower = content.to_ascii_lowercase();
    let mut out = Vec::new();
    let mut i = 0;
    while i < content.len() {
        let rest = &content[i..];
        if scriptlets && rest.starts_with("<%--") {
            i = find_from(content, i + 4, "--%>").map_or(content.len(), |p| p + 4);
        } else if scriptlets && rest.starts_with("<%@") {
            i = find_from(content, i + 3, "%>").map_or(content.len(), |p| p + 2);
        } else if scriptlets && rest.starts_with("<%") {
            let mut start = i + 2;
            if content[start..].starts_with('=') || content[start..].starts_with('!') {
                start += 1;
            }
            let end = find_from(content, start, "%>").unwrap_or(content.len());
            out.push((start, end, Dialect::Java));
            i = (end + 2).min(content.len());
        } else if lower[i..].starts_with("<script") {
            let Some(tag_end) = find_from(content, i, ">") else { break };
            let start = tag_end + 1;
            let end = find_from(&lower, start, "</script").unwrap_or(content.len());
            out.push((start, end, Dialect::Javascript));
            i = end.max(start);
            if i < content.len() {
                i += 1;
            }
        } else {
            i += rest.chars().next().map_or(1, char::len_utf8);
        }
    }
    out
}

fn find_from(haystack: &str, from: usize, needle: &str) -> Option<usize> {
    haystack.get(from..)?.find(needle).map(|p| p + from)
}

struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { starts }
    }

    fn line_of(&self, offset: usize) -> usize {
        self.starts.partition_point(|&s| s <= offset) - 1
    }
}

/// Incremental (line, column) lookup; offsets mostly arrive in increasing order.
struct Cursor {
    offset: usize,
    line: usize,
    column: u32,
}

const OPERATORS: &[&str] = &[
    ">>>=", ">>>", "<<=", ">>=", "===", "!==", "**=", "...", "&&=", "||=", "??=", "->", "::", "++", "--", "&&", "||",
    "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "=>", "**", "?.", "??",
];

const REGEX_PRECEDING_KEYWORDS: &[&str] =
    &["return", "typeof", "case", "do", "else", "in", "instanceof", "new", "delete", "void", "throw", "yield", "await"];

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    lines: &'a LineIndex,
    dialect: Dialect,
    pos: usize,
    end: usize,
    cursor: Cursor,
    tokens: Vec<Token>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, lines: &'a LineIndex, dialect: Dialect, start: usize, end: usize) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            lines,
            dialect,
            pos: start,
            end,
            cursor: Cursor { offset: 0, line: 0, column: 1 },
            tokens: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..self.end]
    }

    fn peek(&self, ahead: usize) -> Option<u8> {
        let i = self.pos + ahead;
        (i < self.end).then(|| self.bytes[i])
    }

    fn locate(&mut self, offset: usize) -> (u32, u32) {
        let line = self.lines.line_of(offset);
        let column = if line == self.cursor.line && offset >= self.cursor.offset {
            self.cursor.column + self.src[self.cursor.offset..offset].chars().count() as u32
        } else {
            self.src[self.lines.starts[line]..offset].chars().count() as u32 + 1
        };
        self.cursor = Cursor { offset, line, column };
        (line as u32 + 1, column)
    }

    fn push(&mut self, kind: TokenKind, start: usize, end: usize) {
        let (line, column) = self.locate(start);
        self.tokens.push(Token { kind, text: self.src[start..end].to_string(), line, column, offset: start });
    }

    fn diagnose(&mut self, at: usize, message: &str) {
        let (line, _) = self.locate(at);
        self.diagnostics.push(Diagnostic { line, message: message.to_string() });
    }

    fn run(&mut self) {
        while self.pos < self.end {
            let c = self.rest().chars().next().expect("pos within bounds");
            let start = self.pos;
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if self.rest().starts_with("//") {
                let len = self.rest().find('\n').unwrap_or(self.end - start);
                self.pos += len;
                self.push(TokenKind::LineComment, start, self.pos);
            } else if self.rest().starts_with("/*") {
                self.block_comment(start);
            } else if c == '"' || c == '\'' || (c == '`' && self.dialect == Dialect::Javascript) {
                self.quoted(start, c);
            } else if c.is_ascii_digit() || (c == '.' && self.peek(1).is_some_and(|b| b.is_ascii_digit())) {
                self.number(start);
            } else if c.is_alphabetic() || c == '_' || c == '$' {
                self.word(start);
            } else if matches!(c, '(' | ')' | '{' | '}' | '[' | ']' | ';' | ',') {
                self.pos += 1;
                self.push(TokenKind::Punctuation, start, self.pos);
            } else if c == '/' && self.dialect == Dialect::Javascript && self.regex_allowed() && self.regex(start) {
                // consumed as a literal
            } else {
                let len = OPERATORS.iter().find(|op| self.rest().starts_with(*op)).map_or(c.len_utf8(), |op| op.len());
                self.pos += len;
                self.push(TokenKind::Operator, start, self.pos);
            }
        }
    }

    fn block_comment(&mut self, start: usize) {
        let kind = if self.rest().starts_with("/**") && !self.rest().starts_with("/**/") {
            TokenKind::DocComment
        } else {
            TokenKind::BlockComment
        };
        match self.rest()[2..].find("*/") {
            Some(p) => self.pos += 2 + p + 2,
            None => {
                self.pos = self.end;
                self.diagnose(start, "unterminated block comment");
            }
        }
        self.push(kind, start, self.pos);
    }

    fn quoted(&mut self, start: usize, quote: char) {
        if quote == '"' && self.dialect == Dialect::Java && self.rest().starts_with("\"\"\"") {
            return self.text_block(start);
        }
        let multiline = quote == '`';
        let kind = if quote == '\'' && self.dialect != Dialect::Javascript {
            TokenKind::CharLiteral
        } else {
            TokenKind::StringLiteral
        };
        let q = quote as u8;
        let mut i = self.pos + 1;
        let mut brace_depth = 0usize;
        let mut terminated = false;
        while i < self.end {
            let b = self.bytes[i];
            if b == b'\\' {
                if !multiline && self.bytes.get(i + 1) == Some(&b'\n') {
                    i += 1;
                    break;
                }
                i += 2;
                continue;
            }
            if multiline {
                if b == b'$' && self.bytes.get(i + 1) == Some(&b'{') {
                    brace_depth += 1;
                    i += 2;
                    continue;
                }
                if brace_depth > 0 {
                    match b {
                        b'{' => brace_depth += 1,
                        b'}' => brace_depth -= 1,
                        _ => {}
                    }
                    i += 1;
                    continue;
                }
            } else if b == b'\n' {
                break;
            }
            if b == q {
                i += 1;
                terminated = true;
                break;
            }
            i += 1;
        }
        // an escape as the final byte may step past the region
        self.pos = self.char_boundary(i.min(self.end));
        if !terminated {
            self.diagnose(start, "unterminated literal");
        }
        self.push(kind, start, self.pos);
    }

    fn text_block(&mut self, start: usize) {
        match self.rest()[3..].find("\"\"\"") {
            Some(p) => self.pos += 3 + p + 3,
            None => {
                self.pos = self.end;
                self.diagnose(start, "unterminated text block");
            }
        }
        self.push(TokenKind::StringLiteral, start, self.pos);
    }

    fn char_boundary(&self, mut i: usize) -> usize {
        while !self.src.is_char_boundary(i) {
            i += 1;
        }
        i
    }

    fn number(&mut self, start: usize) {
        let hex = self.rest().starts_with("0x") || self.rest().starts_with("0X");
        let mut i = self.pos;
        while i < self.end {
            let b = self.bytes[i];
            let exponent_sign = (b == b'+' || b == b'-') && !hex && matches!(self.bytes[i - 1], b'e' | b'E');
            if b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || exponent_sign {
                i += 1;
            } else {
                break;
            }
        }
        self.pos = i;
        self.push(TokenKind::Number, start, self.pos);
    }

    fn word(&mut self, start: usize) {
        let len = self
            .rest()
            .char_indices()
            .find(|&(_, c)| !(c.is_alphanumeric() || c == '_' || c == '$'))
            .map_or(self.end - start, |(i, _)| i);
        self.pos += len;
        let kind = if self.dialect.is_keyword(&self.src[start..self.pos]) {
            TokenKind::Keyword
        } else {
            TokenKind::Identifier
        };
        self.push(kind, start, self.pos);
    }

    fn regex_allowed(&self) -> bool {
        match self.tokens.iter().rev().find(|t| !t.kind.is_comment()) {
            None => true,
            Some(t) => match t.kind {
                TokenKind::Operator => !matches!(t.text.as_str(), "++" | "--"),
                TokenKind::Punctuation => !matches!(t.text.as_str(), ")" | "]" | "}"),
                TokenKind::Keyword => REGEX_PRECEDING_KEYWORDS.contains(&t.text.as_str()),
                _ => false,
            },
        }
    }

    /// Try to read a regular-expression literal; leaves state untouched on failure.
    fn regex(&mut self, start: usize) -> bool {
        let mut i = self.pos + 1;
        let mut in_class = false;
        loop {
            if i >= self.end {
                return false;
            }
            match self.bytes[i] {
                b'\n' => return false,
                b'\\' => i += 1,
                b'[' => in_class = true,
                b']' => in_class = false,
                b'/' if !in_class => break,
                _ => {}
            }
            i += 1;
        }
        i += 1;
        while i < self.end && self.bytes[i].is_ascii_alphabetic() {
            i += 1;
        }
        if i > self.end || !self.src.is_char_boundary(i) {
            return false;
        }
        self.pos = i;
        self.push(TokenKind::StringLiteral, start, self.pos);
        true
    }
}

/// Comment-free lexemes; in ident-blind mode identifiers become `$ID` and
/// literals `$LIT`.
pub fn normalize_tokens(stream: &TokenStream, mode: NormalizeMode) -> Vec<String> {
    stream.code_tokens().map(|t| normalize_one(t, mode).to_string()).collect()
}

pub fn normalize_one(token: &Token, mode: NormalizeMode) -> &str {
    match mode {
        NormalizeMode::Exact => &token.text,
        NormalizeMode::IdentBlind => match token.kind {
            TokenKind::Identifier => ID_PLACEHOLDER,
            k if k.is_literal() => LIT_PLACEHOLDER,
            _ => &token.text,
        },
    }
}
