//! Verification report shared by all verifiers: violations are failures,
//! warnings are recorded but do not fail a run.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            violations: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn violation(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Folds another report's findings into this one, prefixing them with
    /// the source report's name.
    pub fn absorb(&mut self, other: Report) {
        for v in other.violations {
            self.violations.push(format!("{}: {}", other.name, v));
        }
        for w in other.warnings {
            self.warnings.push(format!("{}: {}", other.name, w));
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            write!(f, "{}: ok", self.name)?;
        } else {
            writeln!(f, "{}: {} violation(s)", self.name, self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  violation: {v}")?;
            }
        }
        for w in &self.warnings {
            write!(f, "\n  warning: {w}")?;
        }
        Ok(())
    }
}
