//! Experiment reports and their two text formats.
//!
//! `table_text`:
//!
//! ```text
//! # folner report
//! # schema_version: 1
//! # artifact_version: 0.1.0
//! # experiment: example1
//! # config: seed = 0
//! ...
//!
//! ## table rows
//! h        chi        sum  exact_zero  exactness
//! [1]      char y=[1] 0    true        exact
//!
//! ## verdicts
//! all_exact_zero  true
//! ```
//!
//! Columns are left-aligned, padded to the widest cell, separated by two
//! spaces; trailing spaces are trimmed. A report without tables or verdicts
//! is the header alone.
//!
//! `structured_text` is TOML with the schema
//!
//! ```text
//! schema_version = 1
//! artifact_version = "0.1.0"
//! experiment = "<name>"
//! wall_clock_seconds = <float>          # only when timing is recorded
//! [config]                              # every resolved key
//! [[tables]]  name, columns, rows (array of string arrays)
//! [[verdicts]] name, value
//! ```
//!
//! Both formats are deterministic functions of the report. Wall-clock time
//! is recorded only on request, since it breaks byte reproducibility.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ReportFormat};
use crate::error::{LabError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cells of column `name`, in row order.
    pub fn cells(&self, name: &str) -> Vec<&str> {
        match self.column(name) {
            Some(i) => self.rows.iter().map(|r| r[i].as_str()).collect(),
            None => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub artifact_version: String,
    pub experiment: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_clock_seconds: Option<f64>,
    pub config: BTreeMap<String, String>,
    #[serde(default)]
    pub tables: Vec<Table>,
    #[serde(default)]
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    /// A report with the config echo and nothing else.
    pub fn new(config: &ExperimentConfig) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            artifact_version: ARTIFACT_VERSION.to_string(),
            experiment: config.kind().name().to_string(),
            wall_clock_seconds: None,
            config: config.entries().filter(|(k, _)| *k != "experiment").map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            tables: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn verdict(&self, name: &str) -> Option<&str> {
        self.verdicts.iter().find(|v| v.name == name).map(|v| v.value.as_str())
    }

    pub fn add_verdict(&mut self, name: &str, value: impl ToString) {
        self.verdicts.push(Verdict { name: name.to_string(), value: value.to_string() });
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::TableText => Ok(self.table_text()),
            ReportFormat::StructuredText => toml::to_string(self).map_err(|e| LabError::Serialize(e.to_string())),
        }
    }

    pub fn from_structured_text(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| LabError::Serialize(e.to_string()))
    }

    pub fn table_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# folner report");
        let _ = writeln!(out, "# schema_version: {}", self.schema_version);
        let _ = writeln!(out, "# artifact_version: {}", self.artifact_version);
        let _ = writeln!(out, "# experiment: {}", self.experiment);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# config: {k} = {v}");
        }
        if let Some(t) = self.wall_clock_seconds {
            let _ = writeln!(out, "# wall_clock_seconds: {t}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n## table {}", t.name);
            write_columns(&mut out, std::iter::once(&t.columns).chain(&t.rows));
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(out, "\n## verdicts");
            let rows: Vec<Vec<String>> = self.verdicts.iter().map(|v| vec![v.name.clone(), v.value.clone()]).collect();
            write_columns(&mut out, rows.iter());
        }
        out
    }

    /// Writes the rendered report, creating parent directories.
    pub fn write(&self, format: ReportFormat, path: &Path) -> Result<()> {
        let text = self.render(format)?;
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| LabError::Io { path: dir.to_path_buf(), source })?;
        }
        std::fs::write(path, text).map_err(|source| LabError::Io { path: path.to_path_buf(), source })
    }
}

fn write_columns<'a>(out: &mut String, rows: impl Iterator<Item = &'a Vec<String>> + Clone) {
    let mut widths: Vec<usize> = Vec::new();
    for r in rows.clone() {
        for (i, c) in r.iter().enumerate() {
            let w = c.chars().count();
            match widths.get_mut(i) {
                Some(x) => *x = (*x).max(w),
                None => widths.push(w),
            }
        }
    }
    for r in rows {
        let mut line = String::new();
        for (i, c) in r.iter().enumerate() {
            line.push_str(c);
            if i + 1 < r.len() {
                let pad = widths[i] - c.chars().count() + 2;
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

/// Shortest round-trip decimal form of an `f64`.
pub fn float_cell(x: f64) -> String {
    format!("{x:e}")
}

pub fn bool_cell(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}
