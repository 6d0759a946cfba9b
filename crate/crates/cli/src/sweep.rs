//! Sweep files: a scenario under `[base]` plus one axis to vary.
//!
//! ```toml
//! axis = "lambda"
//! values = [1, 5, 10, 20, 30]
//! seed_policy = "shared"
//!
//! [base]
//! n_antennas = 6
//! # ... every scenario key
//! ```

use serde::Deserialize;

use secsched::{CsiKind, ScenarioConfig};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Lambda,
    V,
    NAntennas,
    Eta,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Lambda => "lambda",
            Axis::V => "v",
            Axis::NAntennas => "n_antennas",
            Axis::Eta => "eta",
        }
    }
}

/// How sweep points pick their seed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedPolicy {
    /// Every point uses the base seed, so points differ only in the axis.
    #[default]
    Shared,
    /// Point `k` (in ascending axis order) uses `seed + k`.
    Incremented,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: Axis,
    values: Vec<f64>,
    #[serde(default)]
    seed_policy: SeedPolicy,
    base: toml::Table,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub axis: Axis,
    /// Ascending, without duplicates.
    pub values: Vec<f64>,
    pub seed_policy: SeedPolicy,
}

impl SweepSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let raw: RawSweep = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        let base = ScenarioConfig::from_toml_str(&toml::to_string(&raw.base).expect("table serializes"))
            .map_err(|e| CliError::Config(format!("[base]: {e}")))?;
        let mut values = raw.values;
        if values.is_empty() {
            return Err(CliError::Config("sweep `values` must not be empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("sweep `values` must be finite".into()));
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        let spec = Self { base, axis: raw.axis, values, seed_policy: raw.seed_policy };
        // Surface every bad point before anything runs.
        let mut problems = Vec::new();
        for k in 0..spec.values.len() {
            if let Err(e) = spec.point(k) {
                problems.push(e.to_string());
            }
        }
        if problems.is_empty() {
            Ok(spec)
        } else {
            Err(CliError::Config(problems.join("; ")))
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.base.seed = seed;
        self
    }

    /// Scenario for the `k`-th axis value.
    pub fn point(&self, k: usize) -> Result<ScenarioConfig, CliError> {
        let x = self.values[k];
        let mut c = self.base.clone();
        match self.axis {
            Axis::Lambda => c.arrival_mean = x,
            Axis::V => c.v = x,
            Axis::NAntennas => {
                if x.fract() != 0.0 || x < 0.0 {
                    return Err(CliError::Config(format!("n_antennas value {x} is not a whole number")));
                }
                c.n_antennas = x as usize;
            }
            Axis::Eta => {
                if c.csi != CsiKind::Partial {
                    return Err(CliError::Config("an eta sweep needs csi = \"partial\" in [base]".into()));
                }
                c.eta = Some(x);
            }
        }
        c.seed = match self.seed_policy {
            SeedPolicy::Shared => self.base.seed,
            SeedPolicy::Incremented => self.base.seed.wrapping_add(k as u64),
        };
        c.validate().map_err(|e| CliError::Config(format!("{} = {x}: {e}", self.axis.name())))?;
        Ok(c)
    }
}
