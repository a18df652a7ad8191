//! Report assembly, JSON and CSV rendering, and golden-file comparison.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const TOOL: &str = "pwreath";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const TIMESTAMP_KEY: &str = "\"generated_at_unix\":";

/// A named table of strings, emitted as CSV.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Config(format!("csv: {e}"));
        writer.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            writer.write_record(row).map_err(csv_err)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| CliError::Config(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// What a subcommand computed, before metadata is attached.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub results: serde_json::Map<String, Value>,
    pub tables: Vec<Table>,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.results
            .insert(key.to_string(), serde_json::to_value(value).expect("plain data serializes"));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub config: RunConfig,
    pub generated_at_unix: u64,
    pub results: serde_json::Map<String, Value>,
    pub tables: Vec<Table>,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(config: RunConfig, outcome: Outcome, generated_at_unix: u64) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            subcommand: config.subcommand.name(),
            config,
            generated_at_unix,
            results: outcome.results,
            tables: outcome.tables,
            violations: outcome.violations,
            notes: outcome.notes,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Every table, each preceded by a `# name` line.
    pub fn to_csv(&self) -> CliResult<String> {
        let mut out = String::new();
        for table in &self.tables {
            out.push_str("# ");
            out.push_str(&table.name);
            out.push('\n');
            out.push_str(&table.to_csv()?);
        }
        Ok(out)
    }
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
pub fn timestamp() -> u64 {
    if let Some(fixed) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok()) {
        return fixed;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Zero the timestamp so that reports from different runs compare byte for byte.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix(TIMESTAMP_KEY) {
            let indent = &line[..line.len() - trimmed.len()];
            let tail = rest.trim_start().trim_start_matches(|c: char| c.is_ascii_digit());
            out.push_str(indent);
            out.push_str(TIMESTAMP_KEY);
            out.push_str(" 0");
            out.push_str(tail);
        } else {
            out.push_str(line);
        }
    }
    out
}

/// First line where two texts differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// 1-based.
    pub line: usize,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |s: &Option<String>| s.clone().unwrap_or_else(|| "<end of file>".into());
        write!(
            f,
            "line {}: expected `{}`, got `{}`",
            self.line,
            show(&self.expected),
            show(&self.actual)
        )
    }
}

/// Compare normalized texts; `None` means equal.
pub fn first_difference(expected: &str, actual: &str) -> Option<Mismatch> {
    let (expected, actual) = (normalize(expected), normalize(actual));
    if expected == actual {
        return None;
    }
    let mut left = expected.lines();
    let mut right = actual.lines();
    let mut line = 0;
    loop {
        line += 1;
        match (left.next(), right.next()) {
            (Some(a), Some(b)) if a == b => continue,
            (None, None) => {
                // only trailing newlines differ
                return Some(Mismatch {
                    line,
                    expected: None,
                    actual: None,
                });
            }
            (a, b) => {
                return Some(Mismatch {
                    line,
                    expected: a.map(str::to_string),
                    actual: b.map(str::to_string),
                })
            }
        }
    }
}

/// Compare a rendered report with a golden file after timestamp normalization.
pub fn golden_compare(rendered: &str, golden: &Path) -> CliResult<Option<Mismatch>> {
    let expected = std::fs::read_to_string(golden).map_err(|e| CliError::Io {
        path: golden.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(first_difference(&expected, rendered))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamps_are_normalized() {
        let a = "{\n  \"generated_at_unix\": 1700000000,\n  \"x\": 1\n}\n";
        let b = "{\n  \"generated_at_unix\": 5,\n  \"x\": 1\n}\n";
        assert_eq!(normalize(a), normalize(b));
        assert!(normalize(a).contains("\"generated_at_unix\": 0,"));
        assert_eq!(first_difference(a, b), None);
    }

    #[test]
    fn mismatch_is_located() {
        let golden = "{\n  \"m\": [1, 3, 11, 45]\n}\n";
        let perturbed = "{\n  \"m\": [1, 3, 11, 46]\n}\n";
        let diff = first_difference(golden, perturbed).unwrap();
        assert_eq!(diff.line, 2);
        assert!(diff.to_string().contains("46"));
    }

    #[test]
    fn empty_golden_mismatches_without_panicking() {
        let diff = first_difference("", "{}\n").unwrap();
        assert_eq!(diff.line, 1);
        assert_eq!(diff.expected, None);
        assert!(first_difference("", "").is_none());
    }

    #[test]
    fn missing_golden_is_an_error() {
        let err = golden_compare("{}", Path::new("/nonexistent/golden.json")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn csv_tables() {
        let mut t = Table::new("moments", &["n", "m_n"]);
        t.push(vec!["1".into(), "1".into()]);
        t.push(vec!["2".into(), "3".into()]);
        assert_eq!(t.to_csv().unwrap(), "n,m_n\n1,1\n2,3\n");
    }
}
