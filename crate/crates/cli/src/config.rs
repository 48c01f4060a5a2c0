//! Scenario selection and run settings.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use bergman::Dim;
use thiserror::Error;

use crate::report::ReportFormat;

/// Environment variable read when `--seed` is absent.
pub const SEED_ENV: &str = "VERIFY_SEED";

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario `{scenario}` does not support dimension {dim}")]
    UnsupportedDim { scenario: Scenario, dim: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write report to {path}: {reason}")]
    Unwritable { path: PathBuf, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    Algebra,
    Analyticity,
    KernelConsistency,
    CauchyFormula,
    ReproduceHalfspace,
    ReproduceBall,
    LimitLemma,
    Density,
    ComplexOracle,
    All,
}

impl Scenario {
    /// Every concrete scenario, in the order `all` runs them.
    pub const SUITE: [Scenario; 9] = [
        Scenario::Algebra,
        Scenario::KernelConsistency,
        Scenario::Analyticity,
        Scenario::LimitLemma,
        Scenario::ComplexOracle,
        Scenario::CauchyFormula,
        Scenario::ReproduceBall,
        Scenario::Density,
        Scenario::ReproduceHalfspace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Algebra => "algebra",
            Scenario::Analyticity => "analyticity",
            Scenario::KernelConsistency => "kernel-consistency",
            Scenario::CauchyFormula => "cauchy-formula",
            Scenario::ReproduceHalfspace => "reproduce-halfspace",
            Scenario::ReproduceBall => "reproduce-ball",
            Scenario::LimitLemma => "limit-lemma",
            Scenario::Density => "density",
            Scenario::ComplexOracle => "complex-oracle",
            Scenario::All => "all",
        }
    }

    /// Dimensions the scenario can run in, default set first.
    pub fn dims(self) -> &'static [Dim] {
        match self {
            Scenario::ReproduceBall | Scenario::LimitLemma => &[Dim::Octonion],
            Scenario::Density => &[Dim::Octonion, Dim::Quaternion],
            Scenario::ComplexOracle => &[Dim::Complex],
            _ => &Dim::ALL,
        }
    }

    fn default_dims(self) -> &'static [Dim] {
        match self {
            Scenario::Density => &[Dim::Octonion],
            s => s.dims(),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::SUITE
            .into_iter()
            .chain([Scenario::All])
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::UnknownScenario(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub dim: Option<Dim>,
    pub seed: u64,
    /// Quadrature samples for stochastic checks; `None` means 10^6.
    pub samples: Option<u64>,
    /// Half-space truncation radius; `None` picks a per-integrand default.
    pub radius: Option<f64>,
    /// Replaces the primary tolerance of every check.
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: ReportFormat,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        ScenarioConfig {
            scenario,
            dim: None,
            seed: DEFAULT_SEED,
            samples: None,
            radius: None,
            tol: None,
            out: None,
            format: ReportFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(dim) = self.dim {
            if self.scenario != Scenario::All && !self.scenario.dims().contains(&dim) {
                return Err(ConfigError::UnsupportedDim {
                    scenario: self.scenario,
                    dim: dim.get(),
                });
            }
        }
        if let Some(n) = self.samples {
            if n < 1000 {
                return Err(ConfigError::Invalid(format!("--samples must be at least 1000, got {n}")));
            }
        }
        if let Some(r) = self.radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(ConfigError::Invalid(format!("--radius must be positive, got {r}")));
            }
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(ConfigError::Invalid(format!("--tol must be non-negative, got {t}")));
            }
        }
        Ok(())
    }

    pub fn samples(&self) -> u64 {
        self.samples.unwrap_or(1_000_000)
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Dimensions to run `scenario` in under this config.
    pub fn dims_for(&self, scenario: Scenario) -> Vec<Dim> {
        match self.dim {
            Some(d) if scenario.dims().contains(&d) => vec![d],
            _ => scenario.default_dims().to_vec(),
        }
    }
}
