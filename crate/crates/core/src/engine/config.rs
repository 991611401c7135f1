use serde::{Deserialize, Serialize};

use crate::analytic::{ExogenousParams, ModelParams};
use crate::error::ValidationError;

/// Interaction environment for a simulation.
///
/// The first five are the classic money/credit environments; `CryptoLedger`
/// replaces goods with tokens on a fully visible account ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Suppliers know who they serve; defection costs only that relationship.
    Bilateral22,
    /// Every recipient is public; defection leads to autarky.
    FullInfo23,
    /// Consumers pay with money and stay anonymous.
    MoneySemianon31,
    /// Money, or credit revealed to the supplier alone.
    MoneyOrBilateral32,
    /// Money, or credit revealed to everyone.
    MoneyOrFullInfo33,
    /// Tokens on a public account ledger.
    CryptoLedger,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Bilateral22,
        Mode::FullInfo23,
        Mode::MoneySemianon31,
        Mode::MoneyOrBilateral32,
        Mode::MoneyOrFullInfo33,
        Mode::CryptoLedger,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Bilateral22 => "Bilateral22",
            Mode::FullInfo23 => "FullInfo23",
            Mode::MoneySemianon31 => "MoneySemianon31",
            Mode::MoneyOrBilateral32 => "MoneyOrBilateral32",
            Mode::MoneyOrFullInfo33 => "MoneyOrFullInfo33",
            Mode::CryptoLedger => "CryptoLedger",
        }
    }

    pub fn has_money(self) -> bool {
        matches!(
            self,
            Mode::MoneySemianon31 | Mode::MoneyOrBilateral32 | Mode::MoneyOrFullInfo33
        )
    }

    pub fn has_credit(self) -> bool {
        !matches!(self, Mode::MoneySemianon31)
    }

    /// Credit consumers become known to every agent, including robbers.
    pub fn credit_is_public(self) -> bool {
        matches!(self, Mode::FullInfo23 | Mode::MoneyOrFullInfo33 | Mode::CryptoLedger)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CollapseRule {
    /// Collapse once outstanding stolen tokens reach this fraction of supply.
    pub theta: f64,
    /// Probability that governance reverses a theft from an important account.
    pub p_r: f64,
}

impl Default for CollapseRule {
    fn default() -> Self {
        CollapseRule { theta: 1.0, p_r: 0.0 }
    }
}

/// Holdings and market structure that the parameter vector leaves open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Economy {
    /// Probability that an agent seeks to trade in a given cycle.
    pub participation: f64,
    /// Agents initially holding money (money modes) or tokens (ledger mode).
    /// Defaults to ⌊N/2⌋.
    pub money_supply: Option<u32>,
    /// Tokens minted to each initial holder in ledger mode.
    pub initial_balance: u64,
    /// Tokens paid for one good in ledger mode.
    pub price: u64,
    /// Tokens taken by one successful theft in ledger mode.
    pub theft_size: u64,
    /// Agent ids whose ledger accounts are flagged important.
    pub important: Vec<u32>,
}

impl Default for Economy {
    fn default() -> Self {
        Economy {
            participation: 0.5,
            money_supply: None,
            initial_balance: 1,
            price: 1,
            theft_size: 1,
            important: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub params: ModelParams,
    pub exo: ExogenousParams,
    pub mode: Mode,
    pub cycles: u64,
    pub trials: u64,
    pub seed: u64,
    pub collapse_rule: CollapseRule,
    pub economy: Economy,
}

impl CycleConfig {
    pub fn new(params: ModelParams, mode: Mode) -> Self {
        CycleConfig {
            params,
            exo: ExogenousParams::default(),
            mode,
            cycles: 100,
            trials: 1000,
            seed: 0,
            collapse_rule: CollapseRule::default(),
            economy: Economy::default(),
        }
    }

    pub fn money_supply(&self) -> u32 {
        self.economy.money_supply.unwrap_or(self.params.n / 2)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        self.params.validate()?;
        self.exo.validate()?;
        let rule = &self.collapse_rule;
        if !(0.0..=1.0).contains(&rule.theta) {
            return Err(ValidationError::new("theta", "0 ≤ θ ≤ 1"));
        }
        if !(0.0..=1.0).contains(&rule.p_r) {
            return Err(ValidationError::new("p_r", "0 ≤ p_r ≤ 1"));
        }
        if self.cycles < 1 {
            return Err(ValidationError::new("cycles", "T ≥ 1"));
        }
        if self.trials < 1 {
            return Err(ValidationError::new("trials", "K ≥ 1"));
        }
        let eco = &self.economy;
        if !(0.0..=1.0).contains(&eco.participation) {
            return Err(ValidationError::new("participation", "0 ≤ participation ≤ 1"));
        }
        let m = self.money_supply();
        if self.mode.has_money() && m >= self.params.n {
            return Err(ValidationError::new("money_supply", "M < N"));
        }
        if m > self.params.n {
            return Err(ValidationError::new("money_supply", "M ≤ N"));
        }
        if eco.theft_size < 1 {
            return Err(ValidationError::new("theft_size", "t ≥ 1"));
        }
        if let Some(bad) = eco.important.iter().find(|&&id| id >= self.params.n) {
            return Err(ValidationError::new(
                "important",
                format!("agent ids < N (got {bad})"),
            ));
        }
        Ok(())
    }
}
