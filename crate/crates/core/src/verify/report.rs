use std::collections::BTreeMap;

use serde::Serialize;

pub const REPORT_VERSION: &str = "hermcong-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedWithinBound,
    #[serde(rename = "FALSIFIED")]
    Falsified,
    Inconclusive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub p: u64,
    pub disc: u64,
    pub m: usize,
    pub k: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub scanned: usize,
    pub congruent: usize,
    pub violations: usize,
    pub not_computable: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub key: String,
    pub value: String,
    pub check: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub hypotheses: Hypotheses,
    pub counts: Counts,
    pub witnesses: Vec<String>,
    pub scalars: BTreeMap<String, String>,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub timings_ms: BTreeMap<String, u64>,
    pub version: String,
}

impl VerificationReport {
    pub fn new(scenario: &str, hypotheses: Hypotheses) -> Self {
        VerificationReport {
            scenario: scenario.to_string(),
            hypotheses,
            counts: Counts::default(),
            witnesses: Vec::new(),
            scalars: BTreeMap::new(),
            violations: Vec::new(),
            verdict: Verdict::Inconclusive,
            reason: None,
            timings_ms: BTreeMap::new(),
            version: REPORT_VERSION.to_string(),
        }
    }

    pub fn inconclusive(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::Inconclusive;
        self.reason = Some(reason.into());
        self
    }

    pub fn violate(&mut self, key: impl Into<String>, value: impl Into<String>, check: impl Into<String>) {
        self.violations.push(Violation { key: key.into(), value: value.into(), check: check.into() });
    }

    /// Sets the verdict from the violation list (scan and scalar checks alike).
    pub fn conclude(&mut self) {
        self.verdict = if self.violations.is_empty() { Verdict::VerifiedWithinBound } else { Verdict::Falsified };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
