//! Letter ratings for reliability, security and maintainability.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CostModel, IssueCounts};
use crate::rules::{Category, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rating {
    A,
    B,
    C,
    D,
    E,
}

impl Rating {
    pub fn as_str(self) -> &'static str {
        match self {
            Rating::A => "A",
            Rating::B => "B",
            Rating::C => "C",
            Rating::D => "D",
            Rating::E => "E",
        }
    }

    /// 1 for A through 5 for E; the numeric form used by gates and trends.
    pub fn score(self) -> u8 {
        self as u8 + 1
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratings {
    pub reliability: Rating,
    pub security: Rating,
    pub maintainability: Rating,
    pub td_ratio: f64,
}

/// Worst present severity: none or info → A, minor → B, major → C,
/// critical → D, blocker → E.
pub fn severity_rating(worst: Option<Severity>) -> Rating {
    match worst {
        None | Some(Severity::Info) => Rating::A,
        Some(Severity::Minor) => Rating::B,
        Some(Severity::Major) => Rating::C,
        Some(Severity::Critical) => Rating::D,
        Some(Severity::Blocker) => Rating::E,
    }
}

/// A when the ratio is at most `bands[0]`, B up to `bands[1]`, and so on; E above `bands[3]`.
pub fn maintainability_rating(td_ratio: f64, bands: &[f64; 4]) -> Rating {
    const LETTERS: [Rating; 4] = [Rating::A, Rating::B, Rating::C, Rating::D];
    bands.iter().zip(LETTERS).find(|(&bound, _)| td_ratio <= bound).map_or(Rating::E, |(_, r)| r)
}

/// Reliability rates bugs, security rates vulnerabilities.
pub fn compute_ratings(counts: &IssueCounts, td_ratio: f64, m: &CostModel) -> Ratings {
    Ratings {
        reliability: severity_rating(counts.worst(Category::Bug)),
        security: severity_rating(counts.worst(Category::Vulnerability)),
        maintainability: maintainability_rating(td_ratio, &m.maintainability_bands),
        td_ratio,
    }
}
