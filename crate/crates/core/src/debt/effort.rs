//! Effort totals and their `1d 6h 15min` display form (8-hour days).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::items::{ItemKind, TdItem};
use crate::rules::Dimension;

pub const MINUTES_PER_DAY: u64 = 8 * 60;

/// Greedy day/hour/minute decomposition; zero parts are omitted.
pub fn format_effort(minutes: u64) -> String {
    if minutes == 0 {
        return "0min".to_string();
    }
    let days = minutes / MINUTES_PER_DAY;
    let hours = minutes % MINUTES_PER_DAY / 60;
    let mins = minutes % 60;
    let mut parts = Vec::new();
    if days > 0 {
        parts.push(format!("{days}d"));
    }
    if hours > 0 {
        parts.push(format!("{hours}h"));
    }
    if mins > 0 {
        parts.push(format!("{mins}min"));
    }
    parts.join(" ")
}

/// Inverse of [`format_effort`]: space-separated `<n>d`, `<n>h`, `<n>min`
/// parts, each at most once and in that order.
pub fn parse_effort(text: &str) -> Option<u64> {
    const UNITS: [(&str, u64); 3] = [("d", MINUTES_PER_DAY), ("h", 60), ("min", 1)];
    let mut total: u64 = 0;
    let mut next_unit = 0;
    let mut any = false;
    for part in text.split_whitespace() {
        let digits = part.find(|c: char| !c.is_ascii_digit())?;
        let (number, unit) = part.split_at(digits);
        if number.is_empty() {
            return None;
        }
        let offset = UNITS[next_unit..].iter().position(|(u, _)| *u == unit)?;
        let (_, scale) = UNITS[next_unit + offset];
        next_unit += offset + 1;
        total = total.checked_add(number.parse::<u64>().ok()?.checked_mul(scale)?)?;
        any = true;
    }
    any.then_some(total)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffortTotals {
    pub per_kind: BTreeMap<ItemKind, u64>,
    pub per_dimension: BTreeMap<Dimension, u64>,
    pub total_minutes: u64,
}

/// Remediation minutes summed per item kind and per dimension; every kind and
/// dimension is present, zero when unused.
pub fn estimate_efforts(items: &[TdItem]) -> EffortTotals {
    let mut totals = EffortTotals {
        per_kind: ItemKind::ALL.iter().map(|&k| (k, 0)).collect(),
        per_dimension: Dimension::ALL.iter().map(|&d| (d, 0)).collect(),
        total_minutes: 0,
    };
    for item in items {
        *totals.per_kind.entry(item.kind).or_default() += item.remediation_minutes;
        *totals.per_dimension.entry(item.dimension).or_default() += item.remediation_minutes;
        totals.total_minutes += item.remediation_minutes;
    }
    totals
}
