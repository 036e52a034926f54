//! JSON reports of named checks and fixed-header CSV tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, EXIT_CHECK_FAILED, EXIT_PASS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// value < tolerance
    Below,
    /// value > tolerance
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub command: String,
    pub checks: Vec<Check>,
    /// Diagnostic numbers that are not checked.
    pub summary: BTreeMap<String, f64>,
    pub all_pass: bool,
    #[serde(skip)]
    selected: Option<Vec<String>>,
}

impl Report {
    pub fn new(scenario: &str, command: &str) -> Self {
        Self {
            scenario: scenario.into(),
            command: command.into(),
            checks: Vec::new(),
            summary: BTreeMap::new(),
            all_pass: true,
            selected: None,
        }
    }

    /// Keeps only the named checks; the others are dropped as they are added.
    pub fn select(&mut self, names: Option<Vec<String>>) {
        self.selected = names;
    }

    /// Selected names that no check used.
    pub fn unmatched_selection(&self) -> Vec<String> {
        self.selected
            .iter()
            .flatten()
            .filter(|n| !self.checks.iter().any(|c| &c.name == *n))
            .cloned()
            .collect()
    }

    fn push(&mut self, name: &str, value: f64, tolerance: f64, comparison: Comparison) {
        if let Some(s) = &self.selected {
            if !s.iter().any(|n| n == name) {
                return;
            }
        }
        let pass = match comparison {
            Comparison::Below => value < tolerance,
            Comparison::Above => value > tolerance,
        };
        self.all_pass &= pass;
        self.checks.push(Check {
            name: name.into(),
            value,
            tolerance,
            comparison,
            pass,
        });
    }

    pub fn below(&mut self, name: &str, value: f64, tolerance: f64) {
        self.push(name, value, tolerance, Comparison::Below);
    }

    pub fn above(&mut self, name: &str, value: f64, tolerance: f64) {
        self.push(name, value, tolerance, Comparison::Above);
    }

    pub fn note(&mut self, name: &str, value: f64) {
        self.summary.insert(name.into(), value);
    }

    pub fn exit_code(&self) -> u8 {
        if self.all_pass {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let op = match c.comparison {
                Comparison::Below => "<",
                Comparison::Above => ">",
            };
            let _ = writeln!(
                out,
                "[{}] {}: {}: {:.3e} {op} {:.1e}",
                if c.pass { "pass" } else { "FAIL" },
                self.scenario,
                c.name,
                c.value,
                c.tolerance
            );
        }
        out
    }
}

/// CSV table with a frozen header; values are written with 17 significant digits.
#[derive(Debug, Clone)]
pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            columns: header.len(),
            text: format!("{}\n", header.join(",")),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns, "row width");
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            let _ = write!(self.text, "{v:.16e}");
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
