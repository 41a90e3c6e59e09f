//! Synthetic snapshots and small on-disk projects for monitor tests.

use std::fs;
use std::path::Path;

use chrono::{DateTime, Duration, TimeZone, Utc};
use debtscope::analysis::{analyze_project, Settings};
use debtscope::debt::{
    fingerprint, Amount, Intentionality, ItemKind, ItemStatus, Location, Rating, TdItem, NOT_ASSIGNED,
};
use debtscope::monitor::{items_digest, Snapshot};
use debtscope::rules::{Category, Dimension, Severity};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn epoch() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2026, 1, 5, 9, 0, 0).unwrap()
}

/// Snapshot of an empty project at `epoch() + minutes`.
pub fn empty_snapshot(minutes: i64) -> Snapshot {
    let dir = tempfile::tempdir().unwrap();
    analyze_project(dir.path(), &Settings::default(), None, &[], epoch() + Duration::minutes(minutes)).unwrap().snapshot
}

const RATINGS: [Rating; 5] = [Rating::A, Rating::B, Rating::C, Rating::D, Rating::E];

fn amount(rng: &mut StdRng) -> Amount {
    let hours = rng.gen_range(0..4000) as f64 / 10.0;
    Amount { hours, currency: hours * 50.0 }
}

/// A random but internally plausible snapshot; `seed` fixes every field.
pub fn synthetic(seed: u64) -> Snapshot {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut s = empty_snapshot(rng.gen_range(0..100_000));
    s.loc = rng.gen_range(0..100_000);
    s.project.totals.lines.code_lines = s.loc;
    s.project.totals.files = rng.gen_range(0..500);
    for c in Category::ALL {
        for sev in Severity::ALL {
            if rng.gen_bool(0.5) {
                s.counts.add(c, sev, rng.gen_range(0..40));
            }
        }
    }
    s.duplication.duplicated_blocks = rng.gen_range(0..50);
    s.duplication.duplicated_lines = rng.gen_range(0..2000);
    s.duplication.density = rng.gen_range(0.0..100.0);
    s.coverage_percent = rng.gen_bool(0.7).then(|| rng.gen_range(0.0..100.0));
    s.principal.duplication = amount(&mut rng);
    s.principal.violations = amount(&mut rng);
    s.principal.total = amount(&mut rng);
    s.td_ratio = rng.gen_range(0.0..60.0);
    s.ratings.reliability = RATINGS[rng.gen_range(0..5)];
    s.ratings.security = RATINGS[rng.gen_range(0..5)];
    s.ratings.maintainability = RATINGS[rng.gen_range(0..5)];
    s.efforts.total_minutes = rng.gen_range(0..100_000);
    let n = rng.gen_range(0..12);
    s.items = (0..n)
        .map(|i| {
            // a small anchor alphabet so pairs share some fingerprints
            let anchor = format!("anchor{}", rng.gen_range(0..6));
            item(&format!("1.{}", i + 1), "A.java", rng.gen_range(1..200), "generic-exception", &anchor, s.timestamp)
        })
        .collect();
    s.items_digest = items_digest(&s.items);
    s
}

pub fn item(id: &str, file: &str, line: u32, source: &str, anchor: &str, at: DateTime<Utc>) -> TdItem {
    TdItem {
        id: id.to_string(),
        kind: ItemKind::CodeSmell,
        location: Location { file: file.to_string(), line },
        responsible: NOT_ASSIGNED.to_string(),
        dimension: Dimension::CodeDebt,
        datetime: at,
        context: "Generic exceptions".to_string(),
        propagation_rule: "No impact to other classes".to_string(),
        intentionality: Intentionality::Unintentional,
        remediation_minutes: 20,
        source: source.to_string(),
        severity: Some(Severity::Major),
        fingerprint: fingerprint(source, file, anchor),
        status: ItemStatus::Open,
    }
}

pub fn write_files(root: &Path, files: &[(&str, &str)]) {
    for (path, text) in files {
        let p = root.join(path);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(p, text).unwrap();
    }
}

/// Analyze `files` laid out in a fresh directory.
pub fn analyze_files(files: &[(&str, &str)], at: DateTime<Utc>) -> Snapshot {
    let dir = tempfile::tempdir().unwrap();
    write_files(dir.path(), files);
    analyze_project(dir.path(), &Settings::default(), None, &[], at).unwrap().snapshot
}
