//! Line-oriented check reports shared by the identity and axiom suites.
//!
//! Text form: one check per line, `<KIND> <name> OK` or
//! `<KIND> <name> FAIL <details> residual=<normalized value>`. The
//! structured form serializes the same fields as JSON.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub kind: String,
    pub name: String,
    /// Context of the failing sample, e.g. `u=... v=...`; empty on success.
    pub details: String,
    /// Normalized rendering of the nonzero residual; `None` on success.
    pub residual: Option<String>,
}

impl CheckLine {
    pub fn ok(kind: &str, name: &str) -> Self {
        CheckLine {
            kind: kind.to_string(),
            name: name.to_string(),
            details: String::new(),
            residual: None,
        }
    }

    pub fn fail(kind: &str, name: &str, details: String, residual: String) -> Self {
        CheckLine {
            kind: kind.to_string(),
            name: name.to_string(),
            details,
            residual: Some(residual),
        }
    }

    pub fn passed(&self) -> bool {
        self.residual.is_none()
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.residual {
            None => write!(f, "{} {} OK", self.kind, self.name),
            Some(residual) => {
                write!(f, "{} {} FAIL", self.kind, self.name)?;
                if !self.details.is_empty() {
                    write!(f, " {}", self.details)?;
                }
                write!(f, " residual={residual}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport { lines: Vec::new() }
    }

    pub fn push(&mut self, line: CheckLine) {
        self.lines.push(line);
    }

    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(CheckLine::passed)
    }

    pub fn passed(&self, name: &str) -> Option<bool> {
        self.lines
            .iter()
            .find(|l| l.name == name)
            .map(CheckLine::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
