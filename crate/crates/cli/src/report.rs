//! Report model and writers.

use std::fs;
use std::io;
use std::path::Path;

use bergman::Element;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub inputs: Value,
    pub expected: Value,
    pub observed: Value,
    pub std_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub build_id: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn push(&mut self, entry: Entry) {
        self.summary.total += 1;
        if entry.pass {
            self.summary.passed += 1;
        }
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for e in other.entries {
            self.push(e);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    /// 0 when every entry passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Elements serialize as arrays of `m` reals, index 0 first.
pub fn element_json(x: &Element) -> Value {
    json!(x.coeffs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

pub fn to_json(report: &VerificationReport) -> String {
    serde_json::to_string(report).expect("report serializes")
}

pub fn to_csv(report: &VerificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name",
        "inputs",
        "expected",
        "observed",
        "std_error",
        "tolerance",
        "pass",
        "wall_time_ms",
    ])
    .expect("in-memory write");
    for e in &report.entries {
        w.write_record([
            e.name.clone(),
            e.inputs.to_string(),
            e.expected.to_string(),
            e.observed.to_string(),
            e.std_error.map(|s| s.to_string()).unwrap_or_default(),
            e.tolerance.to_string(),
            e.pass.to_string(),
            e.wall_time_ms.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv")
}

pub fn emit_report(report: &VerificationReport, format: ReportFormat, path: &Path) -> io::Result<()> {
    let body = match format {
        ReportFormat::Json => to_json(report),
        ReportFormat::Csv => to_csv(report),
    };
    fs::write(path, body)
}

/// Structural check of a JSON report against the published layout.
pub fn check_report_schema(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report must be an object")?;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or("missing array `entries`")?;
    let summary = obj
        .get("summary")
        .and_then(Value::as_object)
        .ok_or("missing object `summary`")?;
    for key in ["total", "passed"] {
        summary
            .get(key)
            .and_then(Value::as_u64)
            .ok_or(format!("summary.{key} must be a non-negative integer"))?;
    }
    for (i, e) in entries.iter().enumerate() {
        let e = e.as_object().ok_or(format!("entry {i} must be an object"))?;
        for key in ["name", "inputs", "expected", "observed", "std_error", "tolerance", "pass", "wall_time_ms"] {
            if !e.contains_key(key) {
                return Err(format!("entry {i} lacks `{key}`"));
            }
        }
        if !e["name"].is_string() {
            return Err(format!("entry {i}: name must be a string"));
        }
        if !e["pass"].is_boolean() {
            return Err(format!("entry {i}: pass must be a boolean"));
        }
        if !e["tolerance"].is_number() || !e["wall_time_ms"].is_number() {
            return Err(format!("entry {i}: tolerance and wall_time_ms must be numbers"));
        }
        if !(e["std_error"].is_number() || e["std_error"].is_null()) {
            return Err(format!("entry {i}: std_error must be a number or null"));
        }
    }
    let passed = entries.iter().filter(|e| e["pass"] == Value::Bool(true)).count() as u64;
    if summary["total"].as_u64() != Some(entries.len() as u64) || summary["passed"].as_u64() != Some(passed) {
        return Err("summary counts disagree with entries".into());
    }
    Ok(())
}
