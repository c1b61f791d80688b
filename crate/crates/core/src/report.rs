//! Machine-readable verification reports.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Compare {
    /// passes when `residual < threshold`
    Below,
    /// passes when `residual > threshold` (negative controls)
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub residual: f64,
    pub threshold: f64,
    pub compare: Compare,
    pub pass: bool,
}

impl Check {
    pub fn below(id: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check { id: id.into(), residual, threshold, compare: Compare::Below, pass: residual < threshold }
    }

    pub fn above(id: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check { id: id.into(), residual, threshold, compare: Compare::Above, pass: residual > threshold }
    }

    /// Exact match of two integers, reported as a residual against `0.5`.
    pub fn count(id: impl Into<String>, got: usize, want: usize) -> Self {
        Self::below(id, got.abs_diff(want) as f64, 0.5)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub seed: u64,
    pub timestamp: u64,
    pub checks: Vec<Check>,
    /// observations that are reported but not graded
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64, checks: Vec<Check>, notes: Vec<String>) -> Self {
        SuiteReport { suite: suite.into(), pass: checks.iter().all(|c| c.pass), seed, timestamp: now(), checks, notes }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub pass: bool,
    pub seed: u64,
    pub timestamp: u64,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn new(suite: impl Into<String>, seed: u64, suites: Vec<SuiteReport>) -> Self {
        VerifyReport { suite: suite.into(), pass: suites.iter().all(|s| s.pass), seed, timestamp: now(), suites }
    }

    /// Zero every timestamp, for byte comparisons.
    pub fn without_timestamps(mut self) -> Self {
        self.timestamp = 0;
        for s in &mut self.suites {
            s.timestamp = 0;
        }
        self
    }
}

/// Unix time in seconds.
pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}
