//! User overrides for TD items, stored one JSON object per line in
//! `.debtscope/annotations`:
//!
//! ```text
//! {"fingerprint":"3f0c9a2e51b7d804","line":42,"responsible":"dana","intentionality":"intentional","status":"acknowledged"}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::debt::{Intentionality, ItemStatus, TdItem};
use crate::{Error, Result};

pub const ANNOTATIONS_FILE: &str = "annotations";

/// How far an item may move from the annotated line and still match.
const LINE_DRIFT: u32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    pub fingerprint: String,
    /// Line the item was on when annotated; omitted means any line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub responsible: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intentionality: Option<Intentionality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<ItemStatus>,
}

/// Blank lines and `#` comments are skipped.
pub fn parse_annotations(text: &str) -> Result<Vec<Annotation>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let a = serde_json::from_str(line).map_err(|e| Error::Invalid(format!("annotations line {}: {e}", i + 1)))?;
        out.push(a);
    }
    Ok(out)
}

/// Missing file means no annotations.
pub fn load_annotations(path: &Path) -> Result<Vec<Annotation>> {
    match std::fs::read_to_string(path) {
        Ok(text) => parse_annotations(&text),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(Error::io(path, e)),
    }
}

/// Attach each annotation to the one item with its fingerprint within ±3 lines.
/// With several such items only an exact line match attaches; otherwise the
/// annotation is detached and reported in the returned warnings.
pub fn apply_annotations(items: &mut [TdItem], annotations: &[Annotation]) -> Vec<String> {
    let mut warnings = Vec::new();
    for a in annotations {
        let near: Vec<usize> = items
            .iter()
            .enumerate()
            .filter(|(_, it)| it.fingerprint == a.fingerprint)
            .filter(|(_, it)| a.line.is_none_or(|l| it.location.line.abs_diff(l) <= LINE_DRIFT))
            .map(|(i, _)| i)
            .collect();
        let target = match near.as_slice() {
            [only] => Some(*only),
            [] => None,
            many => {
                let exact: Vec<usize> =
                    many.iter().copied().filter(|&i| Some(items[i].location.line) == a.line).collect();
                match exact.as_slice() {
                    [only] => Some(*only),
                    _ => {
                        warnings.push(format!(
                            "annotation {} is ambiguous ({} matching items); detached",
                            a.fingerprint,
                            many.len()
                        ));
                        continue;
                    }
                }
            }
        };
        let Some(i) = target else {
            warnings.push(format!("annotation {} matches no current item; detached", a.fingerprint));
            continue;
        };
        let item = &mut items[i];
        if let Some(r) = &a.responsible {
            item.responsible = r.clone();
        }
        if let Some(v) = a.intentionality {
            item.intentionality = v;
        }
        if let Some(s) = a.status {
            item.status = s;
        }
    }
    warnings
}
