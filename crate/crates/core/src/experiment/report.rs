//! Run reports and their CSV/JSON renderings.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::classify::LandauThresholds;
use super::config::ExperimentKind;
use crate::error::{Error, Result};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Usage(format!("unknown format {other:?}, expected csv or json"))),
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => csv_quote(s),
        }
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

macro_rules! cell_from {
    ($($t:ty => $v:ident($conv:expr)),* $(,)?) => {
        $(impl From<$t> for Cell {
            fn from(x: $t) -> Self {
                Cell::$v($conv(x))
            }
        })*
    };
}

cell_from! {
    f64 => Real(|x| x),
    i64 => Int(|x| x),
    u64 => Int(|x: u64| x as i64),
    u32 => Int(i64::from),
    usize => Int(|x: usize| x as i64),
    bool => Bool(|x| x),
    String => Text(|x| x),
    &str => Text(str::to_string),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from table {}", self.name);
        self.rows.push(row);
    }

    /// Index of `column`, for readers of the report.
    pub fn column(&self, column: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == column)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub artifact_version: String,
    pub experiment: ExperimentKind,
    pub seed: u64,
    /// The fully resolved parameters.
    pub config: serde_json::Value,
    pub thresholds: LandauThresholds,
    /// Constants used by the run (theorem ledgers, tolerances).
    pub ledger: serde_json::Value,
    pub checks: Vec<CheckOutcome>,
    pub tables: Vec<Table>,
    pub passed: bool,
    /// Kept out of the serialized output so reruns are byte-identical.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl RunReport {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `#` header lines with the resolved config and ledger, then one block
    /// per table: `# table: name`, a header row and the data rows.
    pub fn to_csv(&self) -> String {
        let compact = |v: &serde_json::Value| serde_json::to_string(v).expect("value serializes");
        let mut out = String::new();
        let _ = write!(out, "# trotter-lab {}\r\n", self.artifact_version);
        let _ = write!(out, "# experiment: {}\r\n", self.experiment.name());
        let _ = write!(out, "# seed: {}\r\n", self.seed);
        let _ = write!(out, "# config: {}\r\n", compact(&self.config));
        let _ = write!(
            out,
            "# thresholds: {}\r\n",
            serde_json::to_string(&self.thresholds).expect("thresholds serialize")
        );
        let _ = write!(out, "# ledger: {}\r\n", compact(&self.ledger));
        let _ = write!(out, "# passed: {}\r\n", self.passed);

        let mut checks = Table::new("checks", &["name", "passed", "detail"]);
        for c in &self.checks {
            checks.push(vec![c.name.as_str().into(), c.passed.into(), c.detail.clone().into()]);
        }
        for table in std::iter::once(&checks).chain(&self.tables) {
            let _ = write!(out, "# table: {}\r\n", table.name);
            let header: Vec<String> = table.columns.iter().map(|c| csv_quote(c)).collect();
            let _ = write!(out, "{}\r\n", header.join(","));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                let _ = write!(out, "{}\r\n", cells.join(","));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_have_seventeen_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
        let back: f64 = format_real(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_quote("a,b"), "\"a,b\"");
        assert_eq!(csv_quote("say \"x\""), "\"say \"\"x\"\"\"");
        assert_eq!(csv_quote("plain"), "plain");
    }
}
