//! Suite reports: check records, CSV tables and their serialization.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};

use super::config::ExperimentConfig;
use crate::error::Result;

/// Significant digits of every number written out.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `v` rounded to [`SIGNIFICANT_DIGITS`].
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().unwrap_or(v)
}

/// Text form used in CSV cells.
pub fn format_sig(v: f64) -> String {
    if v.is_finite() {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
    } else {
        v.to_string()
    }
}

fn ser_sig<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(round_sig(*v))
    } else {
        s.serialize_none()
    }
}

/// The condition a measured value must meet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bound {
    AtMost {
        #[serde(serialize_with = "ser_sig")]
        limit: f64,
    },
    AtLeast {
        #[serde(serialize_with = "ser_sig")]
        limit: f64,
    },
    /// `|value − target| ≤ tolerance`.
    Near {
        #[serde(serialize_with = "ser_sig")]
        target: f64,
        #[serde(serialize_with = "ser_sig")]
        tolerance: f64,
    },
}

impl Bound {
    pub fn admits(&self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        match *self {
            Bound::AtMost { limit } => v <= limit,
            Bound::AtLeast { limit } => v >= limit,
            Bound::Near { target, tolerance } => (v - target).abs() <= tolerance,
        }
    }

    fn describe(&self) -> String {
        match *self {
            Bound::AtMost { limit } => format!("<= {limit:e}"),
            Bound::AtLeast { limit } => format!(">= {limit:e}"),
            Bound::Near { target, tolerance } => format!("= {target} ± {tolerance}"),
        }
    }
}

/// One measured quantity and its verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    #[serde(serialize_with = "ser_sig")]
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
    /// Error message when the measurement itself failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRecord {
    pub fn measured(name: impl Into<String>, value: f64, bound: Bound) -> Self {
        Self {
            name: name.into(),
            value,
            passed: bound.admits(value),
            bound,
            error: None,
        }
    }

    pub fn failed(name: impl Into<String>, bound: Bound, error: String) -> Self {
        Self {
            name: name.into(),
            value: f64::NAN,
            bound,
            passed: false,
            error: Some(error),
        }
    }

    /// One human-readable line.
    pub fn summary(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => format!("{verdict} {}: error: {e}", self.name),
            None => format!("{verdict} {}: {:.4e} (want {})", self.name, self.value, self.bound.describe()),
        }
    }
}

/// A numeric table written as CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from the header");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig(v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Everything one suite measured.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
    pub tables: Vec<Table>,
    /// Free-form records, such as solver histories.
    pub details: serde_json::Map<String, serde_json::Value>,
    #[serde(serialize_with = "ser_sig")]
    pub wall_seconds: f64,
    pub config: ExperimentConfig,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, config: &ExperimentConfig) -> Self {
        Self {
            suite: suite.into(),
            passed: true,
            checks: Vec::new(),
            tables: Vec::new(),
            details: serde_json::Map::new(),
            wall_seconds: 0.0,
            config: config.clone(),
        }
    }

    pub fn add_check(&mut self, check: CheckRecord) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    /// Records a measurement, or a failing check carrying the error.
    pub fn record(&mut self, name: &str, bound: Bound, value: Result<f64>) {
        let check = match value {
            Ok(v) => CheckRecord::measured(name, v, bound),
            Err(e) => CheckRecord::failed(name, bound, e.to_string()),
        };
        self.add_check(check);
    }

    pub fn add_detail<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.details.insert(key.to_string(), round_json(v));
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends another report's checks and tables under a prefix.
    pub fn absorb(&mut self, other: SuiteReport) {
        for mut c in other.checks {
            c.name = format!("{}/{}", other.suite, c.name);
            self.add_check(c);
        }
        for mut t in other.tables {
            t.name = format!("{}-{}", other.suite, t.name);
            self.tables.push(t);
        }
        if !other.details.is_empty() {
            self.details
                .insert(other.suite, serde_json::Value::Object(other.details));
        }
    }

    /// Writes `<dir>/<suite>.json` and one `<dir>/<suite>_<table>.csv` per table.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let json = dir.join(format!("{}.json", self.suite));
        fs::write(&json, serde_json::to_string_pretty(self)?)?;
        written.push(json);
        for t in &self.tables {
            let path = dir.join(format!("{}_{}.csv", self.suite, t.name));
            t.write_csv(std::io::BufWriter::new(fs::File::create(&path)?))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn round_json(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => serde_json::Number::from_f64(round_sig(f)).map_or(Value::Null, Value::Number),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(format_sig(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(round_sig(2.0 / 3.0), 0.666666666667);
        assert!(!Bound::AtMost { limit: 1.0 }.admits(f64::NAN));
        assert!(Bound::Near { target: 2.0, tolerance: 0.1 }.admits(2.05));
    }
}
