//! Scenario configuration: a flat TOML document whose keys are exactly the
//! fields of [`ScenarioConfig`]. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelDims;
use crate::control::{ActionGrid, ControlWeights};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::secrecy::{Collusion, Csi, SecrecyRegime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CsiKind {
    Instantaneous,
    Partial,
}

impl From<CsiKind> for Csi {
    fn from(k: CsiKind) -> Self {
        match k {
            CsiKind::Instantaneous => Csi::Instantaneous,
            CsiKind::Partial => Csi::Partial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_antennas: usize,
    pub n_eves: usize,
    pub n_users: usize,
    pub colluding: bool,
    pub csi: CsiKind,
    /// Secrecy outage level; present exactly when `csi = "partial"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    pub v: f64,
    pub theta: Vec<f64>,
    /// Total-power choices (watts); must contain 0.
    pub power_grid: Vec<f64>,
    /// Data-fraction choices in [0, 1].
    pub ratio_grid: Vec<f64>,
    pub p_av: f64,
    /// Mean arrivals per user per slot (bits).
    pub arrival_mean: f64,
    /// Arrival cap per user per slot (bits); arrivals are Binomial(a_max, arrival_mean / a_max).
    pub a_max: u32,
    pub n_slots: u64,
    pub seed: u64,
}

const REQUIRED_KEYS: &[&str] = &[
    "n_antennas",
    "n_eves",
    "n_users",
    "colluding",
    "csi",
    "v",
    "theta",
    "power_grid",
    "ratio_grid",
    "p_av",
    "arrival_mean",
    "a_max",
    "n_slots",
    "seed",
];
const OPTIONAL_KEYS: &[&str] = &["eta"];

impl Default for ScenarioConfig {
    /// Two users, six antennas, three eavesdroppers, `Π = {0,100,200,300}`,
    /// `P_av = 200`, `Λ = {0, 1/20, …, 1}`, `V = 100`, `λ = A_max = 30`.
    fn default() -> Self {
        Self {
            n_antennas: 6,
            n_eves: 3,
            n_users: 2,
            colluding: false,
            csi: CsiKind::Instantaneous,
            eta: None,
            v: 100.0,
            theta: vec![1.0, 1.0],
            power_grid: vec![0.0, 100.0, 200.0, 300.0],
            ratio_grid: (0..=20).map(|k| k as f64 / 20.0).collect(),
            p_av: 200.0,
            arrival_mean: 30.0,
            a_max: 30,
            n_slots: 100_000,
            seed: 1,
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates a TOML document, reporting every missing or
    /// unknown key by name.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::config(e.message().to_string()))?;
        let mut problems = Vec::new();
        for key in table.keys() {
            if !REQUIRED_KEYS.contains(&key.as_str()) && !OPTIONAL_KEYS.contains(&key.as_str()) {
                problems.push(format!("unknown key `{key}`"));
            }
        }
        for key in REQUIRED_KEYS {
            if !table.contains_key(*key) {
                problems.push(format!("missing key `{key}`"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        let config: Self = table.try_into().map_err(|e: toml::de::Error| Error::config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every cross-field constraint and reports all failures at once.
    pub fn validate(&self) -> Result<()> {
        let mut p = Vec::new();
        if self.n_antennas < 2 {
            p.push(format!("n_antennas must be at least 2, got {}", self.n_antennas));
        }
        if self.n_users == 0 {
            p.push("n_users must be at least 1".to_string());
        }
        if self.n_eves == 0 {
            p.push("n_eves must be at least 1".to_string());
        }
        if self.colluding && self.n_antennas <= self.n_eves {
            p.push(format!(
                "colluding eavesdroppers need n_antennas > n_eves (got {} <= {})",
                self.n_antennas, self.n_eves
            ));
        }
        if self.theta.len() != self.n_users {
            p.push(format!("theta has {} entries but n_users = {}", self.theta.len(), self.n_users));
        }
        if !self.theta.iter().all(|&t| t > 0.0 && t.is_finite()) {
            p.push("theta entries must be positive".to_string());
        }
        if !(self.v > 0.0 && self.v.is_finite()) {
            p.push(format!("v must be positive, got {}", self.v));
        }
        if self.power_grid.is_empty() || !self.power_grid.iter().all(|&x| x >= 0.0 && x.is_finite()) {
            p.push("power_grid must be a non-empty list of nonnegative powers".to_string());
        } else if !self.power_grid.contains(&0.0) {
            p.push("power_grid must contain 0".to_string());
        }
        if self.ratio_grid.is_empty() || !self.ratio_grid.iter().all(|&e| (0.0..=1.0).contains(&e)) {
            p.push("ratio_grid must be a non-empty list of values in [0, 1]".to_string());
        }
        if !(self.p_av >= 0.0 && self.p_av.is_finite()) {
            p.push(format!("p_av must be nonnegative, got {}", self.p_av));
        }
        if self.a_max == 0 {
            p.push("a_max must be at least 1".to_string());
        }
        if !(self.arrival_mean > 0.0 && self.arrival_mean <= self.a_max as f64) {
            p.push(format!("arrival_mean must lie in (0, a_max = {}], got {}", self.a_max, self.arrival_mean));
        }
        if self.n_slots == 0 {
            p.push("n_slots must be at least 1".to_string());
        }
        match (self.csi, self.eta) {
            (CsiKind::Instantaneous, Some(eta)) => {
                p.push(format!("eta = {eta} is set but csi = \"instantaneous\" (perfect secrecy has no outage level)"))
            }
            (CsiKind::Partial, None) => p.push("csi = \"partial\" requires eta".to_string()),
            (CsiKind::Partial, Some(eta)) if !(eta > 0.0 && eta < 1.0) => {
                p.push(format!("eta must lie in (0, 1), got {eta}"))
            }
            _ => {}
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(p))
        }
    }

    pub fn dims(&self) -> ChannelDims {
        ChannelDims { n_antennas: self.n_antennas, n_users: self.n_users, n_eves: self.n_eves }
    }

    pub fn collusion(&self) -> Collusion {
        if self.colluding {
            Collusion::Colluding
        } else {
            Collusion::NonColluding
        }
    }

    pub fn regime<T: Scalar>(&self) -> Result<SecrecyRegime<T>> {
        let regime = SecrecyRegime {
            csi: self.csi.into(),
            collusion: self.collusion(),
            eta: T::lit(self.eta.unwrap_or(0.0)),
        };
        regime.validate()?;
        Ok(regime)
    }

    pub fn grid<T: Scalar>(&self) -> Result<ActionGrid<T>> {
        ActionGrid::new(
            self.power_grid.iter().map(|&x| T::lit(x)).collect(),
            self.ratio_grid.iter().map(|&x| T::lit(x)).collect(),
        )
    }

    pub fn weights<T: Scalar>(&self) -> Result<ControlWeights<T>> {
        ControlWeights::new(T::lit(self.v), self.theta.iter().map(|&x| T::lit(x)).collect())
    }
}
