//! Verification reports shared by the test suites and the command line.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    pub identity: String,
    pub parameters: String,
    pub lhs: String,
    pub rhs: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub status: Status,
    pub checked: u64,
    pub failures: Vec<Failure>,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parts: Vec<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            suite: suite.to_string(),
            status: Status::Pass,
            checked: 0,
            failures: Vec::new(),
            tool_version: TOOL_VERSION.to_string(),
            ring: None,
            details: BTreeMap::new(),
            parts: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn with_ring(mut self, fingerprint: &str) -> Self {
        self.ring = Some(fingerprint.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Record one comparison; a mismatch becomes a failure.
    pub fn check(
        &mut self,
        identity: &str,
        parameters: impl FnOnce() -> String,
        equal: bool,
        lhs: impl FnOnce() -> String,
        rhs: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        if !equal {
            self.fail(Failure {
                identity: identity.to_string(),
                parameters: parameters(),
                lhs: lhs(),
                rhs: rhs(),
                witness: String::new(),
            });
        }
    }

    pub fn fail(&mut self, f: Failure) {
        self.failures.push(f);
        self.status = Status::Fail;
    }

    pub fn detail(&mut self, key: &str, value: String) {
        self.details.insert(key.to_string(), value);
    }

    /// Merge a partial report produced by a worker.
    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        for f in other.failures {
            self.fail(f);
        }
        self.details.extend(other.details);
    }

    /// Attach a sub-report (used by aggregated runs).
    pub fn add_part(&mut self, part: Report) {
        self.checked += part.checked;
        if !part.passed() {
            self.status = Status::Fail;
        }
        self.parts.push(part);
    }

    /// Sort failures so output does not depend on scheduling.
    pub fn finish(mut self) -> Self {
        self.failures.sort();
        self.failures.dedup();
        self.status = if self.failures.is_empty() && self.parts.iter().all(|p| p.passed()) {
            Status::Pass
        } else {
            Status::Fail
        };
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Combine the reports of parallel workers deterministically.
pub fn merge(suite: &str, ring: Option<&str>, parts: impl IntoIterator<Item = Report>) -> Report {
    let mut r = Report::new(suite);
    r.ring = ring.map(str::to_string);
    for p in parts {
        r.absorb(p);
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_tracks_failures() {
        let mut r = Report::new("x");
        r.check("id", String::new, true, String::new, String::new);
        assert!(r.clone().finish().passed());
        r.check("id", || "p".into(), false, || "1".into(), || "2".into());
        let r = r.finish();
        assert!(!r.passed());
        assert_eq!(r.checked, 2);
    }

    #[test]
    fn timing_is_omitted_by_default() {
        let json = Report::new("x").finish().to_json();
        assert!(!json.contains("elapsed_ms"));
    }
}
