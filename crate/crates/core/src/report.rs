//! Named check results and their text/JSON renderings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::scalars::ScalarPoly;
use crate::weyl::OperatorExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Anything that can be checked for exact vanishing.
pub trait Residual {
    fn vanishes(&self) -> bool;
    fn render(&self) -> String;
}

impl Residual for ScalarPoly {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Residual for OperatorExpr {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl<const N: usize> Residual for [OperatorExpr; N] {
    fn vanishes(&self) -> bool {
        self.iter().all(OperatorExpr::is_zero)
    }
    fn render(&self) -> String {
        if self.vanishes() {
            "0".to_string()
        } else {
            let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
            format!("({})", parts.join(", "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub paper_ref: String,
    pub status: Status,
    pub residual: Option<String>,
    pub detail: String,
}

impl Check {
    /// Passes iff the residual is exactly zero.
    pub fn residual(id: impl Into<String>, reference: &str, residual: &impl Residual, detail: impl Into<String>) -> Check {
        let status = if residual.vanishes() { Status::Pass } else { Status::Fail };
        Check {
            id: id.into(),
            paper_ref: reference.to_string(),
            status,
            residual: Some(residual.render()),
            detail: detail.into(),
        }
    }

    /// An informational entry that always passes.
    pub fn note(id: impl Into<String>, reference: &str, detail: impl Into<String>) -> Check {
        Check {
            id: id.into(),
            paper_ref: reference.to_string(),
            status: Status::Pass,
            residual: None,
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    checks: Vec<Check>,
    ids: BTreeSet<String>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    checks: &'a [Check],
    summary: Summary,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a check. Ids must be unique within a report.
    pub fn push(&mut self, check: Check) {
        assert!(self.ids.insert(check.id.clone()), "duplicate check id `{}`", check.id);
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn summary(&self) -> Summary {
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        Summary { total: self.checks.len(), passed, failed: self.checks.len() - passed }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_json(&self) -> String {
        let doc = ReportJson { checks: &self.checks, summary: self.summary() };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(out, "[{tag}] {} — {}", c.id, c.paper_ref).unwrap();
        }
        let s = self.summary();
        writeln!(out, "{} checks: {} passed, {} failed", s.total, s.passed, s.failed).unwrap();
        out
    }
}
