//! Project tree walking, language classification and raw line metrics.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use globset::{Glob, GlobSet, GlobSetBuilder};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_FILE_BYTES: u64 = 10 * 1024 * 1024;

/// Bytes inspected for NUL when deciding whether a file is binary.
const BINARY_SNIFF_BYTES: usize = 8 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Language {
    Java,
    Javascript,
    GenericCfamily,
    Xml,
    Html,
    Css,
    Unknown,
}

impl Language {
    /// Classification is by extension only.
    pub fn from_path(path: &str) -> Language {
        let ext = match path.rsplit_once('.') {
            Some((stem, ext)) if !stem.ends_with('/') && !stem.is_empty() => ext.to_ascii_lowercase(),
            _ => return Language::Unknown,
        };
        match ext.as_str() {
            "java" => Language::Java,
            "js" | "mjs" | "cjs" | "jsx" => Language::Javascript,
            "jsp" | "jspf" | "c" | "h" | "cc" | "cpp" | "cxx" | "hpp" | "cs" => Language::GenericCfamily,
            "xml" | "xsd" | "xsl" | "pom" => Language::Xml,
            "html" | "htm" | "xhtml" => Language::Html,
            "css" => Language::Css,
            _ => Language::Unknown,
        }
    }

    pub fn is_cfamily(self) -> bool {
        matches!(self, Language::Java | Language::Javascript | Language::GenericCfamily)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Javascript => "javascript",
            Language::GenericCfamily => "generic-cfamily",
            Language::Xml => "xml",
            Language::Html => "html",
            Language::Css => "css",
            Language::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Language> {
        Some(match s {
            "java" => Language::Java,
            "javascript" | "js" => Language::Javascript,
            "generic-cfamily" => Language::GenericCfamily,
            "xml" => Language::Xml,
            "html" => Language::Html,
            "css" => Language::Css,
            "unknown" => Language::Unknown,
            _ => return None,
        })
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineMetrics {
    pub total_lines: u64,
    pub code_lines: u64,
    pub comment_lines: u64,
    pub blank_lines: u64,
}

impl LineMetrics {
    pub fn add(&mut self, other: &LineMetrics) {
        self.total_lines += other.total_lines;
        self.code_lines += other.code_lines;
        self.comment_lines += other.comment_lines;
        self.blank_lines += other.blank_lines;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    /// Project-relative, forward slashes.
    pub path: String,
    pub language: Language,
    pub bytes: u64,
    pub line_metrics: LineMetrics,
}

impl SourceFile {
    /// JSP and HTML files carry code only inside embedded script regions.
    pub fn is_template(&self) -> bool {
        let lower = self.path.to_ascii_lowercase();
        lower.ends_with(".jsp") || lower.ends_with(".jspf") || self.language == Language::Html
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanTotals {
    pub lines: LineMetrics,
    pub per_language: BTreeMap<Language, LineMetrics>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectScan {
    pub root: String,
    pub files: Vec<SourceFile>,
    pub scanned_at: DateTime<Utc>,
    pub totals: ScanTotals,
    pub warnings: Vec<String>,
}

impl ProjectScan {
    fn from_files(root: &Path, files: Vec<SourceFile>, warnings: Vec<String>) -> Self {
        let mut totals = ScanTotals::default();
        for f in &files {
            totals.lines.add(&f.line_metrics);
            totals.per_language.entry(f.language).or_default().add(&f.line_metrics);
        }
        ProjectScan { root: root.to_string_lossy().replace('\\', "/"), files, scanned_at: Utc::now(), totals, warnings }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    /// Globs matched against the relative path and against every path component.
    pub exclude: Vec<String>,
    /// Extensions (without dot) to include; empty means every recognised language.
    pub include_extensions: Vec<String>,
    pub max_file_bytes: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            exclude: vec![".git".into(), ".debtscope".into()],
            include_extensions: Vec::new(),
            max_file_bytes: DEFAULT_MAX_FILE_BYTES,
        }
    }
}

struct Filter {
    exclude: GlobSet,
    include_ext: Vec<String>,
}

impl Filter {
    fn new(config: &ScanConfig) -> Result<Self> {
        let mut builder = GlobSetBuilder::new();
        for pattern in &config.exclude {
            let glob = Glob::new(pattern).map_err(|e| Error::Config(format!("bad exclude glob `{pattern}`: {e}")))?;
            builder.add(glob);
        }
        let exclude = builder.build().map_err(|e| Error::Config(format!("bad exclude globs: {e}")))?;
        let include_ext =
            config.include_extensions.iter().map(|e| e.trim_start_matches('.').to_ascii_lowercase()).collect();
        Ok(Filter { exclude, include_ext })
    }

    fn excluded(&self, rel: &str) -> bool {
        if rel.is_empty() {
            return false;
        }
        self.exclude.is_match(rel) || rel.split('/').any(|c| self.exclude.is_match(c))
    }

    fn wanted(&self, rel: &str) -> bool {
        if self.include_ext.is_empty() {
            return Language::from_path(rel) != Language::Unknown;
        }
        match rel.rsplit_once('.') {
            Some((_, ext)) => self.include_ext.iter().any(|e| e.eq_ignore_ascii_case(ext)),
            None => false,
        }
    }
}

/// A scan plus the decoded text of every file, index-aligned with `scan.files`.
#[derive(Debug, Clone)]
pub struct LoadedProject {
    pub scan: ProjectScan,
    pub contents: Vec<String>,
}

enum Loaded {
    File(SourceFile, String),
    Skipped(String),
}

pub fn scan_project(root: &Path, config: &ScanConfig) -> Result<ProjectScan> {
    load_project(root, config).map(|p| p.scan)
}

/// Walk `root` and read every selected file. Output order is lexicographic by path
/// regardless of the parallel read order.
pub fn load_project(root: &Path, config: &ScanConfig) -> Result<LoadedProject> {
    if !root.is_dir() {
        return Err(Error::RootNotFound(root.to_path_buf()));
    }
    let filter = Filter::new(config)?;
    let mut warnings = Vec::new();
    let mut candidates: Vec<(String, PathBuf)> = Vec::new();

    let walker = WalkDir::new(root).follow_links(false).into_iter().filter_entry(|entry| {
        let rel = relative(root, entry.path());
        !filter.excluded(&rel)
    });
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                warnings.push(format!("walk error: {e}"));
                continue;
            }
        };
        let ft = entry.file_type();
        if ft.is_symlink() || !ft.is_file() {
            continue;
        }
        let rel = relative(root, entry.path());
        if filter.wanted(&rel) {
            candidates.push((rel, entry.into_path()));
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0));

    let max = config.max_file_bytes;
    let loaded: Vec<Loaded> = candidates.into_par_iter().map(|(rel, abs)| read_source(rel, &abs, max)).collect();

    let mut files = Vec::with_capacity(loaded.len());
    let mut contents = Vec::with_capacity(loaded.len());
    for item in loaded {
        match item {
            Loaded::File(f, text) => {
                files.push(f);
                contents.push(text);
            }
            Loaded::Skipped(w) => warnings.push(w),
        }
    }
    Ok(LoadedProject { scan: ProjectScan::from_files(root, files, warnings), contents })
}

fn relative(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/")
}

fn read_source(rel: String, abs: &Path, max_bytes: u64) -> Loaded {
    let meta = match fs::metadata(abs) {
        Ok(m) => m,
        Err(e) => return Loaded::Skipped(format!("{rel}: unreadable ({e})")),
    };
    if meta.len() > max_bytes {
        return Loaded::Skipped(format!("{rel}: skipped, {} bytes exceeds limit of {max_bytes}", meta.len()));
    }
    let mut raw = Vec::with_capacity(meta.len() as usize);
    if let Err(e) = fs::File::open(abs).and_then(|mut f| f.read_to_end(&mut raw)) {
        return Loaded::Skipped(format!("{rel}: unreadable ({e})"));
    }
    if raw[..raw.len().min(BINARY_SNIFF_BYTES)].contains(&0) {
        return Loaded::Skipped(format!("{rel}: skipped, binary content"));
    }
    let text = String::from_utf8_lossy(&raw).into_owned();
    let language = Language::from_path(&rel);
    let file = SourceFile { line_metrics: count_lines(&text, language), path: rel, language, bytes: raw.len() as u64 };
    Loaded::File(file, text)
}

#[derive(Clone, Copy, PartialEq)]
enum CommentStyle {
    /// `//` and `/* */`, with string literals respected.
    CFamily,
    /// `/* */` only.
    BlockOnly,
    /// `<!-- -->`.
    Markup,
    None,
}

fn comment_style(language: Language) -> CommentStyle {
    match language {
        Language::Java | Language::Javascript | Language::GenericCfamily => CommentStyle::CFamily,
        Language::Css => CommentStyle::BlockOnly,
        Language::Xml | Language::Html => CommentStyle::Markup,
        Language::Unknown => CommentStyle::None,
    }
}

/// Classify each line as blank, comment or code. A line holding both code and
/// comment counts as code.
pub fn count_lines(content: &str, language: Language) -> LineMetrics {
    let style = comment_style(language);
    let mut m = LineMetrics::default();
    let mut in_block = false;
    for line in content.lines() {
        m.total_lines += 1;
        let (has_code, has_comment) = classify_line(line, style, &mut in_block);
        if has_code {
            m.code_lines += 1;
        } else if has_comment {
            m.comment_lines += 1;
        } else {
            m.blank_lines += 1;
        }
    }
    m
}

fn classify_line(line: &str, style: CommentStyle, in_block: &mut bool) -> (bool, bool) {
    let (open, close): (&str, &str) = match style {
        CommentStyle::CFamily | CommentStyle::BlockOnly => ("/*", "*/"),
        CommentStyle::Markup => ("<!--", "-->"),
        CommentStyle::None => return (!line.trim().is_empty(), false),
    };
    let bytes = line.as_bytes();
    let mut code = false;
    let mut comment = false;
    let mut i = 0;
    while i < bytes.len() {
        if *in_block {
            if !bytes[i].is_ascii_whitespace() {
                comment = true;
            }
            if line[i..].starts_with(close) {
                *in_block = false;
                i += close.len();
            } else {
                i += 1;
            }
            continue;
        }
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if line[i..].starts_with(open) {
            *in_block = true;
            comment = true;
            i += open.len();
        } else if style == CommentStyle::CFamily && line[i..].starts_with("//") {
            comment = true;
            break;
        } else if style == CommentStyle::CFamily && (c == b'"' || c == b'\'' || c == b'`') {
            code = true;
            i = skip_quoted(bytes, i);
        } else {
            code = true;
            i += 1;
        }
    }
    (code, comment)
}

/// Index just past the closing quote, or end of line when unterminated.
fn skip_quoted(bytes: &[u8], start: usize) -> usize {
    let quote = bytes[start];
    let mut i = start + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b if b == quote => return i + 1,
            _ => i += 1,
        }
    }
    bytes.len()
}
