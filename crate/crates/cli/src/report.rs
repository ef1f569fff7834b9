//! Check records and their JSON/CSV serialization.

use std::fmt;
use std::path::Path;

use anyhow::Result;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// A truncated infimum: the bound holds on `[0, t_max]` only.
    Flagged,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Flagged => "FLAGGED",
        })
    }
}

/// Which side of `bound` the value must fall on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `value <= bound`
    AtMost,
    /// `value >= bound`
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// The relation being tested, written out.
    pub identity: String,
    pub value: f64,
    /// Target value for closeness checks; `bound` is then the tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub bound: f64,
    pub comparison: Comparison,
    /// Distance to the bound, positive when satisfied.
    pub margin: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn at_most(name: impl Into<String>, identity: &str, value: f64, bound: f64) -> Self {
        let margin = bound - value;
        Self::new(name, identity, value, bound, Comparison::AtMost, margin)
    }

    pub fn at_least(name: impl Into<String>, identity: &str, value: f64, bound: f64) -> Self {
        let margin = value - bound;
        Self::new(name, identity, value, bound, Comparison::AtLeast, margin)
    }

    /// `|value - expected| <= tol`.
    pub fn within(name: impl Into<String>, identity: &str, value: f64, expected: f64, tol: f64) -> Self {
        let margin = tol - (value - expected).abs();
        let mut r = Self::new(name, identity, value, tol, Comparison::AtMost, margin);
        r.expected = Some(expected);
        r
    }

    fn new(
        name: impl Into<String>,
        identity: &str,
        value: f64,
        bound: f64,
        comparison: Comparison,
        margin: f64,
    ) -> Self {
        // NaN margins fail
        let status = if margin >= 0.0 { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            identity: identity.into(),
            value,
            expected: None,
            bound,
            comparison,
            margin,
            status,
            note: None,
        }
    }

    /// A probe that could not be evaluated.
    pub fn error(name: impl Into<String>, identity: &str, message: String) -> Self {
        Self {
            name: name.into(),
            identity: identity.into(),
            value: f64::NAN,
            expected: None,
            bound: f64::NAN,
            comparison: Comparison::AtMost,
            margin: f64::NAN,
            status: Status::Fail,
            note: Some(message),
        }
    }

    pub fn flagged(mut self, note: impl Into<String>) -> Self {
        if self.status == Status::Pass {
            self.status = Status::Flagged;
        }
        self.note = Some(note.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub tolerance_scale: f64,
    pub grid_size: usize,
    pub fd_first: f64,
    pub fd_second: f64,
    pub tool_version: String,
    /// Seconds since the Unix epoch; the only nondeterministic field.
    pub timestamp: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportBundle {
    pub scenario: String,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
}

impl ReportBundle {
    pub fn new(scenario: String, records: Vec<CheckRecord>, provenance: Provenance) -> Self {
        let mut summary = Summary::default();
        for r in &records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Flagged => summary.flagged += 1,
            }
        }
        Self {
            scenario,
            records,
            summary,
            provenance,
        }
    }

    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = csv::Writer::from_path(path)?;
        out.write_record(["name", "identity", "value", "bound", "margin", "status", "note"])?;
        for r in &self.records {
            out.write_record([
                r.name.clone(),
                r.identity.clone(),
                format!("{:e}", r.value),
                format!("{:e}", r.bound),
                format!("{:e}", r.margin),
                r.status.to_string(),
                r.note.clone().unwrap_or_default(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn print_table(&self) {
        for r in &self.records {
            print!(
                "{:<8} {:<44} value {:>12.4e}  bound {:>10.3e}",
                r.status, r.name, r.value, r.bound
            );
            match &r.note {
                Some(note) => println!("  ({note})"),
                None => println!(),
            }
        }
        println!(
            "{}: {} pass, {} fail, {} flagged",
            self.scenario, self.summary.pass, self.summary.fail, self.summary.flagged
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_margin() {
        assert_eq!(CheckRecord::at_most("a", "x", 1e-9, 1e-8).status, Status::Pass);
        assert_eq!(CheckRecord::at_most("a", "x", 1e-7, 1e-8).status, Status::Fail);
        assert_eq!(CheckRecord::at_least("a", "x", 0.5, 0.0).status, Status::Pass);
        assert_eq!(CheckRecord::at_least("a", "x", f64::NAN, 0.0).status, Status::Fail);
        assert_eq!(CheckRecord::within("h", "x", 0.25005, 0.25, 1e-4).status, Status::Pass);
        assert_eq!(CheckRecord::within("h", "x", 0.2502, 0.25, 1e-4).status, Status::Fail);
        let f = CheckRecord::at_least("c0", "x", 1.0, 0.5).flagged("truncated");
        assert_eq!(f.status, Status::Flagged);
        let still_failing = CheckRecord::at_least("c0", "x", 0.1, 0.5).flagged("truncated");
        assert_eq!(still_failing.status, Status::Fail);
    }

    #[test]
    fn csv_round_trip_quotes_commas() {
        let rec = CheckRecord::at_most("a, b", "x", 1.0, 2.0).with_note("note, with comma");
        let prov = Provenance {
            config_hash: String::new(),
            tolerance_scale: 1.0,
            grid_size: 64,
            fd_first: 1e-5,
            fd_second: 1e-4,
            tool_version: "0".into(),
            timestamp: 0,
        };
        let bundle = ReportBundle::new("s".into(), vec![rec], prov);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        bundle.write_csv(&path).unwrap();
        let mut rd = csv::Reader::from_path(&path).unwrap();
        let row = rd.records().next().unwrap().unwrap();
        assert_eq!(&row[0], "a, b");
        assert_eq!(&row[6], "note, with comma");
    }
}
