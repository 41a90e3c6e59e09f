//! The builtin rule catalog.

use crate::ingest::Language;
use crate::lexer::{Token, TokenKind};
use crate::metrics::structure::{match_pairs, ANONYMOUS};

use super::{all_languages, Category, Dimension, FileView, Matcher, Rule, Scope, Severity, TokenPattern};

/// Heuristics that need more than a flat token pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    EmptyMethod,
    UtilityClassConstructor,
    UnclosedResource,
    FileContentExposure,
    HardcodedCredentials,
}

const RESOURCE_TYPES: &str = "FileInputStream|FileOutputStream|FileReader|FileWriter|RandomAccessFile|\
BufferedReader|BufferedWriter|InputStreamReader|OutputStreamWriter|PrintWriter|PrintStream|\
ObjectInputStream|ObjectOutputStream|DataInputStream|DataOutputStream|ZipFile|JarFile|\
ZipInputStream|ZipOutputStream|Socket|ServerSocket";

const FILE_READS: &[&str] = &[
    "new FileInputStream|FileReader|RandomAccessFile (",
    "Files . readAllBytes|readAllLines|readString|lines|newInputStream|newBufferedReader (",
    "getResourceAsStream|getRealPath (",
    "fs . readFile|readFileSync|createReadStream (",
];

const RESPONSE_WRITES: &[&str] = &[
    "getWriter|getOutputStream (",
    "res|resp|response . send|write|end|sendFile|pipe (",
    "out . print|println|write (",
];

const SECRET_WORDS: &[&str] = &["password", "passwd", "pwd", "secret"];

impl Check {
    pub fn description(self) -> &'static str {
        match self {
            Check::EmptyMethod => "named function whose body holds neither code nor comments",
            Check::UtilityClassConstructor => {
                "class with only static members, no supertypes and a public or implicit constructor"
            }
            Check::UnclosedResource => "`new` of a closeable JDK type in a function without any `try`",
            Check::FileContentExposure => "file-read API and response writer in the same function",
            Check::HardcodedCredentials => "password/secret-named identifier assigned a non-empty string literal",
        }
    }

    pub(crate) fn run(self, view: &FileView) -> Vec<u32> {
        match self {
            Check::EmptyMethod => empty_methods(view),
            Check::UtilityClassConstructor => utility_classes(view),
            Check::UnclosedResource => unclosed_resources(view),
            Check::FileContentExposure => file_exposures(view),
            Check::HardcodedCredentials => credentials(view),
        }
    }
}

fn patterns(sources: &[&str]) -> Vec<TokenPattern> {
    sources.iter().map(|s| TokenPattern::parse(s).expect("builtin pattern parses")).collect()
}

struct Spec {
    id: &'static str,
    title: &'static str,
    category: Category,
    severity: Severity,
    dimension: Dimension,
    suggestion: &'static str,
    propagation: &'static str,
    languages: Vec<Language>,
    scope: Scope,
    matcher: Matcher,
}

impl Spec {
    fn build(self) -> Rule {
        Rule {
            id: self.id.to_string(),
            title: self.title.to_string(),
            category: self.category,
            severity: self.severity,
            dimension: self.dimension,
            remediation_minutes: self.severity.default_remediation_minutes(),
            suggestion: self.suggestion.to_string(),
            propagation: self.propagation.to_string(),
            languages: self.languages,
            scope: self.scope,
            matcher: self.matcher,
            builtin: true,
        }
    }
}

pub fn builtin_rules() -> Vec<Rule> {
    use Language::*;
    let java = || vec![Java, GenericCfamily];
    let code = || vec![Java, Javascript, GenericCfamily, Html];
    let specs = vec![
        Spec {
            id: "empty-method",
            title: "Methods should not be empty",
            category: Category::CodeSmell,
            severity: Severity::Critical,
            dimension: Dimension::CodeDebt,
            suggestion: "Implement the method, throw an UnsupportedOperationException, or add a comment explaining why it is intentionally empty.",
            propagation: "Can cause unexpected behavior in production.",
            languages: code(),
            scope: Scope::Anywhere,
            matcher: Matcher::Check(Check::EmptyMethod),
        },
        Spec {
            id: "reuse-random",
            title: "\"Random\" objects should be reused",
            category: Category::Bug,
            severity: Severity::Critical,
            dimension: Dimension::CodeDebt,
            suggestion: "Create the Random once, store it in a field, and reuse it across calls.",
            propagation: "May produce non accepted results; JDK dependent",
            languages: java(),
            scope: Scope::FunctionBody,
            matcher: Matcher::Tokens(patterns(&["new Random (", "new java . util . Random ("])),
        },
        Spec {
            id: "generic-exception",
            title: "Generic exceptions",
            category: Category::CodeSmell,
            severity: Severity::Major,
            dimension: Dimension::CodeDebt,
            suggestion: "Catch or throw the specific exception types that can occur, or define a dedicated exception class.",
            propagation: "No impact to other classes",
            languages: java(),
            scope: Scope::Anywhere,
            matcher: Matcher::Tokens(patterns(&[
                "catch ( final Exception|Throwable|RuntimeException|Error $ID )",
                "catch ( Exception|Throwable|RuntimeException|Error $ID )",
                "throw new Exception|Throwable|RuntimeException|Error (",
                "throws Exception|Throwable|RuntimeException|Error",
            ])),
        },
        Spec {
            id: "utility-class-public-constructor",
            title: "Utility classes should not have public constructors",
            category: Category::CodeSmell,
            severity: Severity::Major,
            dimension: Dimension::CodeDebt,
            suggestion: "Add a private constructor so the class cannot be instantiated.",
            propagation: "No impact to other classes",
            languages: java(),
            scope: Scope::Anywhere,
            matcher: Matcher::Check(Check::UtilityClassConstructor),
        },
        Spec {
            id: "stdout-logging",
            title: "Logging",
            category: Category::CodeSmell,
            severity: Severity::Minor,
            dimension: Dimension::CodeDebt,
            suggestion: "Replace standard-output printing with a logger at an appropriate level.",
            propagation: "Useful for debugging",
            languages: code(),
            scope: Scope::Anywhere,
            matcher: Matcher::Tokens(patterns(&[
                "System . out|err . $ID (",
                ". printStackTrace ( )",
                "console . log|debug|info|warn|error|trace (",
            ])),
        },
        Spec {
            id: "unclosed-resource",
            title: "Failure to properly close resources",
            category: Category::Bug,
            severity: Severity::Blocker,
            dimension: Dimension::CodeDebt,
            suggestion: "Open the resource in a try-with-resources statement, or close it in a finally block.",
            propagation: "This can lead to denial of service",
            languages: java(),
            scope: Scope::FunctionBody,
            matcher: Matcher::Check(Check::UnclosedResource),
        },
        Spec {
            id: "file-content-exposure",
            title: "File Handling",
            category: Category::SecurityHotspot,
            severity: Severity::Critical,
            dimension: Dimension::CodeDebt,
            suggestion: "Check that the file path cannot be influenced by the request and that its content may be disclosed.",
            propagation: "Exposing a file's content is dangerous",
            languages: code(),
            scope: Scope::FunctionBody,
            matcher: Matcher::Check(Check::FileContentExposure),
        },
        Spec {
            id: "dynamic-code-execution",
            title: "Dynamic Code Execution",
            category: Category::SecurityHotspot,
            severity: Severity::Blocker,
            dimension: Dimension::CodeDebt,
            suggestion: "Avoid evaluating code built at run time; parse data with a dedicated parser instead.",
            propagation: "Dangerous to execute unknown code",
            languages: code(),
            scope: Scope::Anywhere,
            matcher: Matcher::Tokens(patterns(&["eval (", "new Function ("])),
        },
        Spec {
            id: "todo-comment",
            title: "Track uses of TODO and FIXME tags",
            category: Category::CodeSmell,
            severity: Severity::Minor,
            dimension: Dimension::DocumentationDebt,
            suggestion: "Resolve the pending work or move it to the issue tracker and remove the tag.",
            propagation: "N/A",
            languages: all_languages(),
            scope: Scope::Anywhere,
            matcher: Matcher::Comments(vec!["TODO".to_string(), "FIXME".to_string()]),
        },
        Spec {
            id: "hardcoded-credentials",
            title: "Credentials should not be hard-coded",
            category: Category::Vulnerability,
            severity: Severity::Blocker,
            dimension: Dimension::CodeDebt,
            suggestion: "Load credentials from the environment or a secret store and rotate the exposed value.",
            propagation: "N/A",
            languages: code(),
            scope: Scope::Anywhere,
            matcher: Matcher::Check(Check::HardcodedCredentials),
        },
    ];
    specs.into_iter().map(Spec::build).collect()
}

fn has_comment_between(view: &FileView, open: &Token, close: &Token) -> bool {
    view.stream.tokens.iter().any(|t| t.kind.is_comment() && t.offset > open.offset && t.offset < close.offset)
}

fn empty_methods(view: &FileView) -> Vec<u32> {
    let s = view.structure;
    s.functions
        .iter()
        .zip(&s.bodies)
        .filter(|(f, &(open, close))| {
            f.name != ANONYMOUS
                && close == open + 1
                && close < view.code.len()
                && !has_comment_between(view, view.code[open], view.code[close])
        })
        .map(|(f, _)| f.start_line)
        .collect()
}

fn function_has_try(view: &FileView, function: usize) -> bool {
    let (open, close) = view.structure.bodies[function];
    view.code[open..close.min(view.code.len())].iter().any(|t| t.is_keyword("try"))
}

fn unclosed_resources(view: &FileView) -> Vec<u32> {
    let pattern = TokenPattern::parse(&format!("new {RESOURCE_TYPES} (")).expect("resource pattern parses");
    pattern
        .find_all(&view.code)
        .into_iter()
        .filter(|&i| view.structure.enclosing_function(i).is_some_and(|f| !function_has_try(view, f)))
        .map(|i| view.code[i].line)
        .collect()
}

fn file_exposures(view: &FileView) -> Vec<u32> {
    let reads = patterns(FILE_READS);
    let writes = patterns(RESPONSE_WRITES);
    let hits = |ps: &[TokenPattern]| -> Vec<(usize, usize)> {
        ps.iter()
            .flat_map(|p| p.find_all(&view.code))
            .filter_map(|i| view.structure.enclosing_function(i).map(|f| (f, i)))
            .collect()
    };
    let writers: Vec<usize> = hits(&writes).into_iter().map(|(f, _)| f).collect();
    hits(&reads).into_iter().filter(|(f, _)| writers.contains(f)).map(|(_, i)| view.code[i].line).collect()
}

fn credentials(view: &FileView) -> Vec<u32> {
    let code = &view.code;
    (0..code.len().saturating_sub(2))
        .filter(|&i| {
            let name = code[i].text.to_ascii_lowercase();
            code[i].kind == TokenKind::Identifier
                && SECRET_WORDS.iter().any(|w| name.contains(w))
                && (code[i + 1].is_op("=") || code[i + 1].is_op(":"))
                && code[i + 2].kind == TokenKind::StringLiteral
                && code[i + 2].text.len() > 2
        })
        .map(|i| code[i].line)
        .collect()
}

struct Member<'t> {
    header: &'t [&'t Token],
    has_body: bool,
}

/// Direct members of the class body `code[open..=close]`.
fn members<'t>(code: &'t [&'t Token], open: usize, close: usize, close_of: &[Option<usize>]) -> Vec<Member<'t>> {
    let mut out = Vec::new();
    let mut start = open + 1;
    let mut k = open + 1;
    while k < close {
        let t = code[k];
        if t.is_punct("{") {
            out.push(Member { header: &code[start..k], has_body: true });
            k = close_of[k].unwrap_or(close) + 1;
            start = k;
        } else if t.is_punct(";") {
            if k > start {
                out.push(Member { header: &code[start..k], has_body: false });
            }
            k += 1;
            start = k;
        } else {
            k += 1;
        }
    }
    out
}

fn utility_classes(view: &FileView) -> Vec<u32> {
    let code = &view.code;
    let braces = match_pairs(code, "{", "}");
    let mut lines = Vec::new();
    for i in 0..code.len() {
        if !code[i].is_keyword("class") || (i > 0 && code[i - 1].is_op(".")) {
            continue;
        }
        let Some(name) = code.get(i + 1).filter(|t| t.kind == TokenKind::Identifier) else {
            continue;
        };
        let Some(open) = (i + 2..code.len()).find(|&k| code[k].is_punct("{") || code[k].is_punct(";")) else {
            continue;
        };
        if !code[open].is_punct("{") {
            continue;
        }
        if code[i + 2..open].iter().any(|t| t.is_keyword("extends") || t.is_keyword("implements")) {
            continue;
        }
        let modifiers = code[..i].iter().rev().take_while(|t| t.kind == TokenKind::Keyword);
        if modifiers.clone().any(|t| t.is_keyword("abstract")) {
            continue;
        }
        let close = braces.close_of[open].unwrap_or(code.len());

        let mut statics = 0;
        let mut instance = 0;
        let mut constructors: Vec<(u32, bool)> = Vec::new();
        let mut has_main = false;
        for m in members(code, open, close, &braces.close_of) {
            let h = m.header;
            if h.iter().any(|t| t.is_keyword("class") || t.is_keyword("interface") || t.is_keyword("enum")) {
                continue;
            }
            if h.is_empty() {
                if m.has_body {
                    instance += 1;
                }
                continue;
            }
            if let Some(p) = h.iter().position(|t| t.is_punct("(")) {
                let ctor = p > 0
                    && h[p - 1].text == name.text
                    && (p == 1 || h[p - 2].kind == TokenKind::Keyword || h[p - 2].is_punct(")") || {
                        p >= 3 && h[p - 2].kind == TokenKind::Identifier && h[p - 3].is_op("@")
                    });
                if ctor {
                    constructors.push((h[p - 1].line, h.iter().any(|t| t.is_keyword("public"))));
                    continue;
                }
                has_main |= h[p - 1].text == "main";
            }
            if h.iter().any(|t| t.is_keyword("static")) {
                statics += 1;
            } else {
                instance += 1;
            }
        }
        if statics == 0 || instance > 0 || has_main {
            continue;
        }
        if constructors.is_empty() {
            lines.push(name.line);
        } else {
            lines.extend(constructors.iter().filter(|(_, public)| *public).map(|(line, _)| *line));
        }
    }
    lines
}
