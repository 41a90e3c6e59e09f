//! Hand-evaluated expectations for the principal formulas and the rating
//! tables, written out independently of the library's implementation.

use debtscope::debt::Rating;
use debtscope::rules::Severity;

/// (description, computed-by-hand currency) for each component example.
pub struct Example {
    pub what: &'static str,
    pub expected: f64,
}

/// The unit costs, in effort-hours per unit, used by the hand evaluations.
pub const BLOCK: f64 = 2.0;
pub const HIGH: f64 = 0.5;
pub const MEDIUM: f64 = 0.3;
pub const LOW: f64 = 0.1;
pub const COMMENT_API: f64 = 0.2;
pub const COVER_LINE: f64 = 0.2;
pub const CUT_EDGE: f64 = 4.0;
pub const SPLIT_METHOD: f64 = 0.5;
pub const SPLIT_CLASS: f64 = 8.0;

pub fn relative_error(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Reliability/security letter for a set of present severities, by table lookup.
pub fn severity_letter(present: &[Severity]) -> Rating {
    if present.contains(&Severity::Blocker) {
        Rating::E
    } else if present.contains(&Severity::Critical) {
        Rating::D
    } else if present.contains(&Severity::Major) {
        Rating::C
    } else if present.contains(&Severity::Minor) {
        Rating::B
    } else {
        Rating::A
    }
}

/// Every subset of the five severities, as a bitmask-ordered list.
pub fn severity_subsets() -> Vec<Vec<Severity>> {
    (0u32..32)
        .map(|mask| Severity::ALL.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &s)| s).collect())
        .collect()
}
