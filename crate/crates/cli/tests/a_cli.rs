use std::fs;
use std::process::{Command, Output};

use bergman::Dim;
use bergman_verify::{
    check_report_schema, emit_report, run_scenario, Entry, ReportFormat, Scenario, ScenarioConfig,
    VerificationReport,
};
use serde_json::{json, Value};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .env_remove("VERIFY_SEED")
        .output()
        .expect("binary runs")
}

fn without_wall_time(text: &str) -> String {
    let key = "\"wall_time_ms\":";
    let mut out = String::new();
    let mut rest = text;
    while let Some(i) = rest.find(key) {
        out.push_str(&rest[..i + key.len()]);
        rest = &rest[i + key.len()..];
        let end = rest.find(['}', ',']).unwrap_or(rest.len());
        rest = &rest[end..];
    }
    out.push_str(rest);
    out
}

#[test]
fn empty_report_serializes_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    emit_report(&VerificationReport::default(), ReportFormat::Json, &path).unwrap();
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        r#"{"entries":[],"summary":{"total":0,"passed":0}}"#
    );
}

#[test]
fn csv_report_has_header_and_one_row() {
    let mut report = VerificationReport::default();
    report.push(Entry {
        name: "limit-lemma/final-error".into(),
        inputs: json!({"x": [1.0, 0.0]}),
        expected: json!([0.5, 0.0]),
        observed: json!([0.5, 0.0]),
        std_error: None,
        tolerance: 1e-5,
        pass: true,
        wall_time_ms: 0.1,
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    emit_report(&report, ReportFormat::Csv, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rows.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["name", "inputs", "expected", "observed", "std_error", "tolerance", "pass", "wall_time_ms"]
    );
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 1);
    assert_eq!(&records[0][0], "limit-lemma/final-error");
    assert_eq!(&records[0][6], "true");
    let inputs: Value = serde_json::from_str(&records[0][1]).unwrap();
    assert_eq!(inputs, json!({"x": [1.0, 0.0]}));
}

#[test]
fn full_run_passes_schema_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all.json");
    let out = verify(&["all", "--samples", "4000", "--out", path.to_str().unwrap()]);
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    check_report_schema(&report).unwrap();

    let entries = report["entries"].as_array().unwrap();
    for scenario in Scenario::SUITE {
        assert!(
            entries.iter().any(|e| e["name"].as_str().unwrap().starts_with(scenario.name())),
            "no entries for {scenario}"
        );
    }
    // limit-lemma fails at these radii, so the run as a whole fails
    assert_eq!(out.status.code(), Some(1));
    let typed: VerificationReport = serde_json::from_value(report).unwrap();
    assert!(typed.failures().any(|e| e.name == "limit-lemma/final-error"));
}

#[test]
fn elements_are_arrays_of_m_reals() {
    for (dim, m) in [(Dim::Complex, 2), (Dim::Quaternion, 4), (Dim::Octonion, 8)] {
        let mut cfg = ScenarioConfig::new(Scenario::KernelConsistency);
        cfg.dim = Some(dim);
        let report = run_scenario(&cfg);
        let e = report
            .entries
            .iter()
            .find(|e| e.name.ends_with("diagonal-at-e0"))
            .unwrap();
        let observed = e.observed.as_array().unwrap();
        assert_eq!(observed.len(), m);
        let want = (m as f64 - 1.0) / 2f64.powi(m as i32 - 1);
        assert!((observed[0].as_f64().unwrap() - want).abs() < 1e-15);
    }
}

#[test]
fn rerun_is_identical_apart_from_wall_time() {
    let args = ["reproduce-halfspace", "--dim", "4", "--samples", "20000", "--seed", "11"];
    let a = verify(&args);
    let b = verify(&args);
    assert_eq!(a.status.code(), b.status.code());
    let (a, b) = (String::from_utf8(a.stdout).unwrap(), String::from_utf8(b.stdout).unwrap());
    assert!(a.contains("\"wall_time_ms\":"));
    assert_eq!(without_wall_time(&a), without_wall_time(&b));

    let c = verify(&["reproduce-halfspace", "--dim", "4", "--samples", "20000", "--seed", "12"]);
    assert_ne!(without_wall_time(&a), without_wall_time(&String::from_utf8(c.stdout).unwrap()));
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_verify"));
        cmd.args(["algebra", "--dim", "2"]).env_remove("VERIFY_SEED");
        if let Some(v) = env {
            cmd.env("VERIFY_SEED", v);
        }
        if let Some(v) = flag {
            cmd.args(["--seed", v]);
        }
        without_wall_time(&String::from_utf8(cmd.output().unwrap().stdout).unwrap())
    };
    let by_env = run(Some("7"), None);
    assert_eq!(by_env, run(None, Some("7")));
    assert_ne!(by_env, run(None, None));
    assert_eq!(run(Some("7"), Some("9")), run(None, Some("9")));
}

#[test]
fn exit_codes() {
    assert_eq!(verify(&["algebra"]).status.code(), Some(0));
    assert_eq!(verify(&["limit-lemma"]).status.code(), Some(1));
    assert_eq!(verify(&["no-such-scenario"]).status.code(), Some(2));
    assert_eq!(verify(&["algebra", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(verify(&["limit-lemma", "--dim", "2"]).status.code(), Some(2));
    assert_eq!(verify(&["density", "--samples", "10"]).status.code(), Some(2));
    assert_eq!(verify(&["algebra", "--format", "xml"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("r.json");
    assert_eq!(verify(&["algebra", "--out", bad.to_str().unwrap()]).status.code(), Some(2));
    let bad_env = Command::new(env!("CARGO_BIN_EXE_verify"))
        .arg("algebra")
        .env("VERIFY_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn module_errors_become_failed_entries() {
    // A radius inside the pole offset leaves the tail envelope unbounded.
    let mut cfg = ScenarioConfig::new(Scenario::ReproduceHalfspace);
    cfg.dim = Some(Dim::Complex);
    cfg.samples = Some(2000);
    cfg.radius = Some(0.5);
    let report = run_scenario(&cfg);
    assert!(report.summary.total > 0);
    let e = &report.entries[0];
    assert!(!e.pass);
    assert!(e.observed["error"].as_str().unwrap().contains("not integrable"));
    assert_eq!(report.exit_code(), 1);
}

#[test]
fn csv_output_from_binary() {
    let out = verify(&["limit-lemma", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,inputs,expected,observed,std_error,tolerance,pass,wall_time_ms");
    assert_eq!(lines.len(), 4);
}

#[test]
fn tolerance_override_applies() {
    let mut cfg = ScenarioConfig::new(Scenario::LimitLemma);
    cfg.tol = Some(1e-4);
    let report = run_scenario(&cfg);
    let last = report.entries.iter().find(|e| e.name == "limit-lemma/final-error").unwrap();
    assert_eq!(last.tolerance, 1e-4);
    assert!(last.pass);
}

#[test]
fn small_stochastic_runs_pass() {
    for scenario in [Scenario::CauchyFormula, Scenario::ComplexOracle, Scenario::ReproduceBall] {
        let mut cfg = ScenarioConfig::new(scenario);
        cfg.samples = Some(100_000);
        cfg.dim = Some(if scenario == Scenario::ComplexOracle { Dim::Complex } else { Dim::Octonion });
        let report = run_scenario(&cfg);
        let failed: Vec<_> = report.failures().map(|e| &e.name).collect();
        assert!(failed.is_empty(), "{scenario}: {failed:?}");
    }
}
