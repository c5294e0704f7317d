//! Check/suite report types shared by the library checkers and the CLI.

use serde::Serialize;

/// Outcome of one named identity or property check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Exact witness (point and value) or a short diagnostic on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, detail: None }
    }

    pub fn pass_with(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, detail: Some(detail.into()) }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass: false, detail: Some(detail.into()) }
    }

    pub fn from_zero_test(
        name: impl Into<String>,
        zt: &crate::expr::ZeroTest,
    ) -> Self {
        if zt.zero {
            Check::pass(name)
        } else {
            let (p, val) = zt.witness.as_ref().expect("nonzero test carries witness");
            Check::fail(name, format!("nonzero value {val} at {p}"))
        }
    }
}

/// A named group of checks.
#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub name: String,
    pub checks: Vec<Check>,
    /// Findings that are informational rather than pass/fail, e.g. which of
    /// two candidate transcriptions of a coefficient holds.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Suite {
    pub fn new(name: impl Into<String>) -> Self {
        Suite { name: name.into(), checks: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}
