//! Line-coverage ingestion.
//!
//! Two input formats, detected from the first meaningful line:
//!
//! * native: one `path<TAB>coverable<TAB>covered` record per line; blank lines
//!   and lines starting with `#` are ignored,
//! * an LCOV subset: `SF:`, `DA:<line>,<hits>[,checksum]` and `end_of_record`.
//!   `TN`, `VER`, `FN*`, `BR*`, `LF` and `LH` records are accepted and ignored.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverageFormat {
    Native,
    Lcov,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Detail {
    Counts {
        coverable: u64,
        covered: u64,
    },
    /// Hit count per source line.
    Lines(BTreeMap<u32, u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileCoverage {
    detail: Detail,
}

impl FileCoverage {
    pub fn from_counts(coverable: u64, covered: u64) -> Self {
        FileCoverage { detail: Detail::Counts { coverable, covered } }
    }

    pub fn coverable_lines(&self) -> u64 {
        match &self.detail {
            Detail::Counts { coverable, .. } => *coverable,
            Detail::Lines(lines) => lines.len() as u64,
        }
    }

    pub fn covered_lines(&self) -> u64 {
        match &self.detail {
            Detail::Counts { covered, .. } => *covered,
            Detail::Lines(lines) => lines.values().filter(|&&h| h > 0).count() as u64,
        }
    }

    /// Line maps merge by max hits per line; plain counts by max of each count.
    fn merge(&mut self, other: &FileCoverage) {
        match (&mut self.detail, &other.detail) {
            (Detail::Lines(a), Detail::Lines(b)) => {
                for (&line, &hits) in b {
                    let e = a.entry(line).or_insert(0);
                    *e = (*e).max(hits);
                }
            }
            _ => {
                let coverable = self.coverable_lines().max(other.coverable_lines());
                let covered = self.covered_lines().max(other.covered_lines()).min(coverable);
                self.detail = Detail::Counts { coverable, covered };
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageData {
    pub files: BTreeMap<String, FileCoverage>,
}

impl CoverageData {
    pub fn coverable_lines(&self) -> u64 {
        self.files.values().map(FileCoverage::coverable_lines).sum()
    }

    pub fn covered_lines(&self) -> u64 {
        self.files.values().map(FileCoverage::covered_lines).sum()
    }

    /// Project line coverage in percent; `None` when nothing is coverable.
    pub fn percent(&self) -> Option<f64> {
        let coverable = self.coverable_lines();
        (coverable > 0).then(|| 100.0 * self.covered_lines() as f64 / coverable as f64)
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    fn insert(&mut self, path: String, file: FileCoverage) {
        match self.files.get_mut(&path) {
            Some(existing) => existing.merge(&file),
            None => {
                self.files.insert(path, file);
            }
        }
    }

    pub fn merge(mut self, other: &CoverageData) -> CoverageData {
        for (path, file) in &other.files {
            self.insert(path.clone(), file.clone());
        }
        self
    }

    /// Re-key entries onto scanned paths. A report path matches a scanned path
    /// when equal, or when the scanned path is a `/`-bounded suffix of it (the
    /// longest such suffix wins). Unmatched entries are dropped with a warning.
    pub fn align_to(&self, scanned: &[&str]) -> (CoverageData, Vec<String>) {
        let mut out = CoverageData::default();
        let mut warnings = Vec::new();
        for (path, file) in &self.files {
            let normalized = path.replace('\\', "/");
            let target = scanned
                .iter()
                .filter(|s| normalized == **s || normalized.ends_with(&format!("/{s}")))
                .max_by_key(|s| s.len());
            match target {
                Some(t) => out.insert(t.to_string(), file.clone()),
                None => warnings.push(format!("coverage report lists {path}, which is not among the scanned files")),
            }
        }
        (out, warnings)
    }
}

pub fn detect_format(report: &str) -> CoverageFormat {
    let first = report.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with("SF:") || l.starts_with("TN:") || l.starts_with("VER:") => CoverageFormat::Lcov,
        _ => CoverageFormat::Native,
    }
}

pub fn parse_coverage(report: &str) -> Result<CoverageData> {
    match detect_format(report) {
        CoverageFormat::Native => parse_native(report),
        CoverageFormat::Lcov => parse_lcov(report),
    }
}

pub fn load_coverage(path: &Path) -> Result<CoverageData> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_coverage(&String::from_utf8_lossy(&bytes))
}

fn malformed(line: usize, message: impl Into<String>) -> Error {
    Error::Coverage { line, message: message.into() }
}

fn parse_native(report: &str) -> Result<CoverageData> {
    let mut data = CoverageData::default();
    for (i, raw) in report.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [path, coverable, covered] = fields[..] else {
            return Err(malformed(n, format!("expected 3 tab-separated fields, found {}", fields.len())));
        };
        if path.is_empty() {
            return Err(malformed(n, "empty path"));
        }
        let number = |s: &str, what: &str| {
            s.trim().parse::<u64>().map_err(|_| malformed(n, format!("{what} `{s}` is not a non-negative integer")))
        };
        let coverable = number(coverable, "coverable")?;
        let covered = number(covered, "covered")?;
        if covered > coverable {
            return Err(malformed(n, format!("covered {covered} exceeds coverable {coverable}")));
        }
        data.insert(path.to_string(), FileCoverage::from_counts(coverable, covered));
    }
    Ok(data)
}

const IGNORED_LCOV: &[&str] =
    &["TN", "VER", "FN", "FNDA", "FNF", "FNH", "FNL", "FNA", "BRDA", "BRF", "BRH", "LF", "LH"];

fn parse_lcov(report: &str) -> Result<CoverageData> {
    let mut data = CoverageData::default();
    let mut current: Option<(String, BTreeMap<u32, u64>, usize)> = None;
    for (i, raw) in report.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "end_of_record" {
            let (path, lines, _) = current.take().ok_or_else(|| malformed(n, "end_of_record without SF"))?;
            data.insert(path, FileCoverage { detail: Detail::Lines(lines) });
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(malformed(n, format!("unrecognised record `{line}`")));
        };
        match key {
            "SF" => {
                if let Some((path, _, opened)) = &current {
                    return Err(malformed(n, format!("SF before end_of_record of {path} (opened on line {opened})")));
                }
                if value.is_empty() {
                    return Err(malformed(n, "empty SF path"));
                }
                current = Some((value.to_string(), BTreeMap::new(), n));
            }
            "DA" => {
                let (_, lines, _) = current.as_mut().ok_or_else(|| malformed(n, "DA outside of an SF section"))?;
                let mut parts = value.split(',');
                let (Some(l), Some(h)) = (parts.next(), parts.next()) else {
                    return Err(malformed(n, format!("DA expects `line,hits`, got `{value}`")));
                };
                let l: u32 =
                    l.parse().ok().filter(|&l| l > 0).ok_or_else(|| malformed(n, format!("bad line number `{l}`")))?;
                // Some producers emit negative hit counts for overflowed counters.
                let h: i64 = h.parse().map_err(|_| malformed(n, format!("bad hit count `{h}`")))?;
                let e = lines.entry(l).or_insert(0);
                *e = (*e).max(h.max(0) as u64);
            }
            k if IGNORED_LCOV.contains(&k) => {}
            k => return Err(malformed(n, format!("unsupported LCOV record `{k}`"))),
        }
    }
    if let Some((path, _, opened)) = current {
        return Err(malformed(opened, format!("section for {path} is missing end_of_record")));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_report() {
        let d = parse_coverage("").unwrap();
        assert!(d.is_empty());
        assert_eq!((d.coverable_lines(), d.covered_lines()), (0, 0));
        assert_eq!(d.percent(), None);
    }

    #[test]
    fn native_rollup() {
        let d = parse_coverage("# produced by hand\nsrc/A.java\t10\t4\n").unwrap();
        assert_eq!(d.percent(), Some(40.0));
    }

    #[test]
    fn lcov_lines() {
        let d = parse_coverage("TN:\nSF:src/a.js\nDA:1,1\nDA:2,0\nLF:2\nLH:1\nend_of_record\n").unwrap();
        assert_eq!(detect_format("SF:x"), CoverageFormat::Lcov);
        let f = &d.files["src/a.js"];
        assert_eq!((f.coverable_lines(), f.covered_lines()), (2, 1));
    }

    #[test]
    fn duplicate_sections_merge_by_max_per_line() {
        let d =
            parse_coverage("SF:a.js\nDA:1,0\nDA:2,3\nend_of_record\nSF:a.js\nDA:1,2\nDA:3,0\nend_of_record\n").unwrap();
        let f = &d.files["a.js"];
        assert_eq!((f.coverable_lines(), f.covered_lines()), (3, 2));
        let d = parse_coverage("a.java\t10\t2\na.java\t8\t5\n").unwrap();
        assert_eq!((d.coverable_lines(), d.covered_lines()), (10, 5));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("a\t1\n", 1),
            ("ok\t2\t1\nb\tx\t1\n", 2),
            ("a\t1\t2\n", 1),
            ("SF:a\nDA:1\nend_of_record\n", 2),
            ("SF:a\nDA:0,1\nend_of_record\n", 2),
            ("SF:a\nDA:1,1\n", 1),
            ("TN:\nDA:1,1\n", 2),
            ("SF:a\nXYZ:1\nend_of_record\n", 2),
            ("SF:a\nSF:b\n", 2),
        ];
        for (src, line) in cases {
            match parse_coverage(src) {
                Err(Error::Coverage { line: l, .. }) => assert_eq!(l, line, "{src:?}"),
                other => panic!("{src:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn alignment_by_path_suffix() {
        let d = parse_coverage(
            "SF:/home/ci/work/src/app/main.js\nDA:1,1\nend_of_record\nSF:/tmp/other.js\nDA:1,0\nend_of_record\n",
        )
        .unwrap();
        let (aligned, warnings) = d.align_to(&["src/app/main.js", "app/main.js", "lib/x.js"]);
        assert_eq!(aligned.files.keys().collect::<Vec<_>>(), vec!["src/app/main.js"]);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("/tmp/other.js"));
    }

    fn native_record() -> impl Strategy<Value = (String, u64, u64)> {
        ("[a-z]{1,6}\\.java", 0u64..50).prop_flat_map(|(p, c)| (Just(p), Just(c), 0..=c))
    }

    proptest! {
        #[test]
        fn parsing_is_total(src in "(SF:|DA:|end_of_record|TN:|[a-z0-9,\\t:#-]){0,12}(\n(SF:|DA:|end_of_record|[a-z0-9,\\t:#-]){0,12}){0,8}") {
            let _ = parse_coverage(&src);
        }

        #[test]
        fn disjoint_merge_is_concatenation(
            a in prop::collection::btree_map("[a-m]{1,5}\\.java", (0u64..40, 0u64..40), 0..5),
            b in prop::collection::btree_map("[n-z]{1,5}\\.java", (0u64..40, 0u64..40), 0..5),
        ) {
            let render = |m: &BTreeMap<String, (u64, u64)>| m.iter()
                .map(|(p, &(x, y))| format!("{p}\t{}\t{}\n", x.max(y), x.min(y)))
                .collect::<String>();
            let (ra, rb) = (render(&a), render(&b));
            let merged = parse_coverage(&ra).unwrap().merge(&parse_coverage(&rb).unwrap());
            prop_assert_eq!(merged, parse_coverage(&format!("{ra}{rb}")).unwrap());
        }

        #[test]
        fn covered_never_exceeds_coverable(records in prop::collection::vec(native_record(), 0..8)) {
            let src: String = records.iter().map(|(p, c, v)| format!("{p}\t{c}\t{v}\n")).collect();
            let d = parse_coverage(&src).unwrap();
            for f in d.files.values() {
                prop_assert!(f.covered_lines() <= f.coverable_lines());
            }
        }
    }
}
