//! Scenario files: one JSON document describing an experiment.
//!
//! ```json
//! {
//!   "params": {"alpha": 0.2, "epsilon": 0.5, "f": 1, "u": 1, "c": 0.1,
//!              "s": 0.05, "delta": 0.9, "n": 10},
//!   "mode": "CryptoLedger",
//!   "collapse_rule": {"theta": 0.5, "p_r": 0.9},
//!   "cycles": 200
//! }
//! ```
//!
//! Only `params` is required. Defaults: `mode` FullInfo23, `cycles` 100,
//! `trials` 1000, `collapse_rule` θ = 1 and p_r = 0, no exogenous terms,
//! and the [`Economy`] defaults. `seed` has no default here; the caller
//! supplies one. Unknown keys anywhere are rejected.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{ExogenousParams, LedgerFate, ModelParams};
use crate::engine::{CollapseRule, CycleConfig, Economy, Mode};
use crate::error::ValidationError;
use crate::taxonomy::{LedgerKind, Locus, TokenProfile, ValueBacking};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// Exogenous terms. `u_e` may be given directly, or as a per-token price
/// applied to `economy.theft_size`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExoSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub price_per_token: Option<f64>,
    pub c_e: f64,
}

/// A constant-product pool and a pending victim swap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolSection {
    pub reserve_x: f64,
    pub reserve_y: f64,
    pub victim_in: f64,
    #[serde(default)]
    pub min_out: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontrun: Option<f64>,
    #[serde(default)]
    pub gas: f64,
    #[serde(default)]
    pub bid: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub security: Locus,
    pub backing: ValueBacking,
    pub host: LedgerKind,
}

impl ProfileSection {
    pub fn profile(&self) -> TokenProfile {
        TokenProfile::new(self.security, self.backing, self.host)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub params: ModelParams,
    #[serde(default)]
    pub exo: ExoSection,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub collapse_rule: CollapseRule,
    #[serde(default = "default_cycles")]
    pub cycles: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub economy: Economy,
    /// Ledger fate assumed by closed-form evaluation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fate: Option<LedgerFate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool: Option<PoolSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_profile: Option<ProfileSection>,
}

fn default_mode() -> Mode {
    Mode::FullInfo23
}

fn default_cycles() -> u64 {
    100
}

fn default_trials() -> u64 {
    1000
}

impl ScenarioFile {
    pub fn new(params: ModelParams) -> Self {
        ScenarioFile {
            params,
            exo: ExoSection::default(),
            mode: default_mode(),
            collapse_rule: CollapseRule::default(),
            cycles: default_cycles(),
            trials: default_trials(),
            seed: None,
            economy: Economy::default(),
            fate: None,
            pool: None,
            token_profile: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn exogenous(&self) -> ExogenousParams {
        let u_e = match (self.exo.u_e, self.exo.price_per_token) {
            (Some(u_e), _) => u_e,
            (None, Some(price)) => price * self.economy.theft_size as f64,
            (None, None) => 0.0,
        };
        ExogenousParams { u_e, c_e: self.exo.c_e }
    }

    /// Simulation config using `seed`, falling back to the file's own seed.
    pub fn cycle_config(&self, seed: u64) -> CycleConfig {
        CycleConfig {
            params: self.params,
            exo: self.exogenous(),
            mode: self.mode,
            cycles: self.cycles,
            trials: self.trials,
            seed: self.seed.unwrap_or(seed),
            collapse_rule: self.collapse_rule,
            economy: self.economy.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.exo.u_e.is_some() && self.exo.price_per_token.is_some() {
            return Err(ValidationError::new("exo", "at most one of u_e and price_per_token"));
        }
        if let Some(price) = self.exo.price_per_token {
            if !(price >= 0.0 && price.is_finite()) {
                return Err(ValidationError::new("price_per_token", "price ≥ 0"));
            }
        }
        if let Some(pool) = &self.pool {
            let positive = |v: f64| v > 0.0 && v.is_finite();
            if !positive(pool.reserve_x) {
                return Err(ValidationError::new("reserve_x", "reserve > 0"));
            }
            if !positive(pool.reserve_y) {
                return Err(ValidationError::new("reserve_y", "reserve > 0"));
            }
            if !positive(pool.victim_in) {
                return Err(ValidationError::new("victim_in", "amount > 0"));
            }
            if !(pool.min_out >= 0.0 && pool.min_out.is_finite()) {
                return Err(ValidationError::new("min_out", "min_out ≥ 0"));
            }
            if !(pool.gas >= 0.0 && pool.bid >= 0.0) {
                return Err(ValidationError::new("gas", "gas, bid ≥ 0"));
            }
        }
        self.cycle_config(0).validate()
    }
}

pub fn parse_scenario(path: impl AsRef<Path>) -> Result<ScenarioFile, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ScenarioFile::from_json(&text)
}
