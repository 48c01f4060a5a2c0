use std::fs::OpenOptions;
use std::path::PathBuf;
use std::process::ExitCode;

use bergman::Dim;
use bergman_verify::{emit_report, run_scenario, ConfigError, ReportFormat, Scenario, ScenarioConfig, SEED_ENV};
use clap::Parser;

/// Run numerical verification scenarios and write a report.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Cli {
    /// algebra, analyticity, kernel-consistency, cauchy-formula,
    /// reproduce-halfspace, reproduce-ball, limit-lemma, density,
    /// complex-oracle or all
    scenario: String,
    /// Restrict to one algebra dimension
    #[arg(long, value_parser = ["2", "4", "8"])]
    dim: Option<String>,
    /// Quadrature samples per stochastic check (default 1000000)
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, env = SEED_ENV, default_value_t = bergman_verify::config::DEFAULT_SEED)]
    seed: u64,
    /// Half-space truncation radius
    #[arg(long)]
    radius: Option<f64>,
    /// Replaces the default tolerance of every check
    #[arg(long)]
    tol: Option<f64>,
    /// Report path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
}

fn config(cli: Cli) -> Result<ScenarioConfig, ConfigError> {
    let scenario: Scenario = cli.scenario.parse()?;
    let dim = cli
        .dim
        .map(|d| d.parse::<usize>().map_err(|_| ConfigError::Invalid(format!("bad dimension `{d}`"))))
        .transpose()?
        .map(|d| Dim::try_from(d).map_err(|e| ConfigError::Invalid(e.to_string())))
        .transpose()?;
    let cfg = ScenarioConfig {
        scenario,
        dim,
        seed: cli.seed,
        samples: cli.samples,
        radius: cli.radius,
        tol: cli.tol,
        out: cli.out,
        format: cli.format,
    };
    cfg.validate()?;
    if let Some(path) = &cfg.out {
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| ConfigError::Unwritable {
                path: path.clone(),
                reason: e.to_string(),
            })?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cfg = match config(Cli::parse()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run_scenario(&cfg);
    for e in report.failures() {
        eprintln!("FAIL {}", e.name);
    }
    eprintln!("{}/{} checks passed", report.summary.passed, report.summary.total);

    match &cfg.out {
        Some(path) => {
            if let Err(e) = emit_report(&report, cfg.format, path) {
                eprintln!("verify: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            let body = match cfg.format {
                ReportFormat::Json => bergman_verify::to_json(&report) + "\n",
                ReportFormat::Csv => bergman_verify::to_csv(&report),
            };
            print!("{body}");
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
