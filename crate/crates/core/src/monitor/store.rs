//! `.debtscope/history.log`: one JSON snapshot per line, append-only, guarded by
//! a lock file so only one writer appends at a time.

use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use super::{Snapshot, SCHEMA_VERSION};
use crate::{Error, Result};

pub const STORE_DIR: &str = ".debtscope";
pub const HISTORY_FILE: &str = "history.log";
pub const LOCK_FILE: &str = "history.lock";

#[derive(Debug, Clone)]
pub struct HistoryStore {
    dir: PathBuf,
}

/// Removes the lock file when the append finishes, successfully or not.
struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl HistoryStore {
    /// The store of the project rooted at `root`. Nothing is created until the
    /// first append.
    pub fn for_project(root: &Path) -> Self {
        HistoryStore { dir: root.join(STORE_DIR) }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        HistoryStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn history_path(&self) -> PathBuf {
        self.dir.join(HISTORY_FILE)
    }

    pub fn lock_path(&self) -> PathBuf {
        self.dir.join(LOCK_FILE)
    }

    /// All committed snapshots in run order. A missing history file is an
    /// empty store.
    pub fn snapshots(&self) -> Result<Vec<Snapshot>> {
        let path = self.history_path();
        match fs::read(&path) {
            Ok(bytes) => parse_history(&bytes),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    pub fn latest(&self) -> Result<Option<Snapshot>> {
        Ok(self.snapshots()?.pop())
    }

    /// The snapshot with `run_id`, or an error listing the ids on record.
    pub fn get(&self, run_id: u64) -> Result<Snapshot> {
        let all = self.snapshots()?;
        let available = all.iter().map(|s| s.run_id.to_string()).collect::<Vec<_>>();
        all.into_iter().find(|s| s.run_id == run_id).ok_or_else(|| Error::UnknownRun {
            requested: run_id,
            available: if available.is_empty() { "none".to_string() } else { available.join(", ") },
        })
    }

    /// Append `snapshot` under the next run id and return that id. Existing
    /// bytes are never rewritten; a corrupted history is refused.
    pub fn record(&self, snapshot: &Snapshot) -> Result<u64> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let _lock = self.lock()?;
        let existing = self.snapshots()?;
        let run_id = existing.last().map_or(1, |s| s.run_id + 1);

        let mut record = snapshot.clone();
        record.schema_version = SCHEMA_VERSION;
        record.run_id = run_id;
        let mut line =
            serde_json::to_string(&record).map_err(|e| Error::Invalid(format!("serialize snapshot: {e}")))?;
        line.push('\n');

        let path = self.history_path();
        let mut file = OpenOptions::new().create(true).append(true).open(&path).map_err(|e| Error::io(&path, e))?;
        file.write_all(line.as_bytes()).map_err(|e| Error::io(&path, e))?;
        file.sync_data().map_err(|e| Error::io(&path, e))?;
        Ok(run_id)
    }

    fn lock(&self) -> Result<LockGuard> {
        let path = self.lock_path();
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(LockGuard(path))
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(Error::StoreLocked(path)),
            Err(e) => Err(Error::io(path, e)),
        }
    }
}

/// Parse history bytes, naming the byte offset of the first bad record.
pub(crate) fn parse_history(bytes: &[u8]) -> Result<Vec<Snapshot>> {
    let mut out: Vec<Snapshot> = Vec::new();
    let mut offset = 0usize;
    let mut line_no = 0usize;
    while offset < bytes.len() {
        line_no += 1;
        let corrupt = |message: String| Error::CorruptRecord { offset: offset as u64, line: line_no, message };
        let rest = &bytes[offset..];
        let Some(len) = rest.iter().position(|&b| b == b'\n') else {
            return Err(corrupt("record is not terminated by a newline (truncated write?)".to_string()));
        };
        let text = std::str::from_utf8(&rest[..len]).map_err(|e| corrupt(format!("invalid UTF-8: {e}")))?;
        let snapshot: Snapshot = serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
        if snapshot.schema_version != SCHEMA_VERSION {
            return Err(corrupt(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                snapshot.schema_version
            )));
        }
        if let Some(prev) = out.last() {
            if snapshot.run_id <= prev.run_id {
                return Err(corrupt(format!("run_id {} does not follow {}", snapshot.run_id, prev.run_id)));
            }
        }
        out.push(snapshot);
        offset += len + 1;
    }
    Ok(out)
}
