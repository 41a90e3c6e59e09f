//! Threshold quality gates.
//!
//! ```toml
//! [[condition]]
//! metric = "blocker_issues"
//! op = "<="
//! bound = 0
//! level = "fail"
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{is_metric_key, unknown_metric, Snapshot};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equal,
}

impl Comparator {
    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::AtMost => "<=",
            Comparator::AtLeast => ">=",
            Comparator::Equal => "==",
        }
    }

    /// `==` allows a relative slack of 1e-9 so derived floats compare sanely.
    pub fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Comparator::AtMost => value <= bound,
            Comparator::AtLeast => value >= bound,
            Comparator::Equal => (value - bound).abs() <= 1e-9 * bound.abs().max(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateLevel {
    Warn,
    #[default]
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Condition {
    pub metric: String,
    pub op: Comparator,
    pub bound: f64,
    #[serde(default)]
    pub level: GateLevel,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.metric, self.op.as_str(), self.bound)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateConfig {
    #[serde(default, rename = "condition")]
    pub conditions: Vec<Condition>,
}

impl GateConfig {
    pub fn validate(&self) -> Result<()> {
        for c in &self.conditions {
            if !is_metric_key(&c.metric) {
                return Err(unknown_metric(&c.metric));
            }
            if !c.bound.is_finite() {
                return Err(Error::Config(format!("gate condition `{c}` needs a finite bound")));
            }
        }
        Ok(())
    }
}

pub fn parse_gate_config(text: &str) -> Result<GateConfig> {
    let config: GateConfig = toml::from_str(text).map_err(|e| Error::Config(format!("gate config: {e}")))?;
    config.validate()?;
    Ok(config)
}

pub fn load_gate_config(path: &Path) -> Result<GateConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gate_config(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateStatus {
    Pass,
    Warn,
    Fail,
}

impl GateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GateStatus::Pass => "pass",
            GateStatus::Warn => "warn",
            GateStatus::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub condition: Condition,
    /// `None` when the snapshot has no value for the metric.
    pub actual: Option<f64>,
    pub breached: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateResult {
    pub status: GateStatus,
    pub verdicts: Vec<ConditionVerdict>,
}

/// A breached fail-level condition fails the gate; breached warn-level
/// conditions only warn. A condition on a metric the snapshot lacks is
/// reported as breached at warn level whatever its configured level, since
/// nothing was measured.
pub fn evaluate_gate(snapshot: &Snapshot, gate: &GateConfig) -> Result<GateResult> {
    let mut status = GateStatus::Pass;
    let mut verdicts = Vec::with_capacity(gate.conditions.len());
    for c in &gate.conditions {
        let actual = snapshot.metric(&c.metric)?;
        let (breached, effect) = match actual {
            Some(v) if c.op.holds(v, c.bound) => (false, GateStatus::Pass),
            Some(_) => (true, if c.level == GateLevel::Fail { GateStatus::Fail } else { GateStatus::Warn }),
            None => (true, GateStatus::Warn),
        };
        status = status.max(effect);
        verdicts.push(ConditionVerdict { condition: c.clone(), actual, breached });
    }
    Ok(GateResult { status, verdicts })
}
