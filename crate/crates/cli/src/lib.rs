//! Scenario runner for the Bergman kernel checks, shared by the `verify`
//! binary and its tests.

pub mod config;
pub mod report;
pub mod scenarios;

pub use config::{ConfigError, Scenario, ScenarioConfig, SEED_ENV};
pub use report::{
    check_report_schema, emit_report, to_csv, to_json, Entry, ReportFormat, Summary, VerificationReport,
};
pub use scenarios::run_scenario;
