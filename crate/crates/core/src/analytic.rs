//! Closed-form theft, sustainability and exchange-value conditions.
//!
//! Every function here is a direct evaluation of one inequality or
//! benefit expression. Comparisons are exact `f64` comparisons; strictness
//! matches the relation each function documents. The simulator in
//! [`crate::engine`] is validated against these values.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ValidationError;

/// Parameter vector shared by every model in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Fraction of theft attempts that succeed when the victim holds the asset.
    pub alpha: f64,
    /// Fraction of the victim's loss captured by the robber, in (0, 1).
    pub epsilon: f64,
    /// Loss to the victim of a theft, in utils.
    pub f: f64,
    /// Utility of one unit of the good (or token) to its holder.
    pub u: f64,
    /// Robber's cost of one attempt. May be negative.
    pub c: f64,
    /// Cost of supply; on a ledger this is the network fee.
    pub s: f64,
    /// Common discount factor, in (0, 1].
    pub delta: f64,
    /// Number of agents.
    pub n: u32,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            alpha: 0.2,
            epsilon: 0.5,
            f: 1.0,
            u: 1.0,
            c: 0.1,
            s: 0.05,
            delta: 0.9,
            n: 10,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), ValidationError> {
        let check = |ok: bool, key: &'static str, constraint: &'static str| {
            if ok {
                Ok(())
            } else {
                Err(ValidationError::new(key, constraint))
            }
        };
        check((0.0..=1.0).contains(&self.alpha), "alpha", "0 ≤ α ≤ 1")?;
        check(self.epsilon > 0.0 && self.epsilon < 1.0, "epsilon", "0 < ε < 1")?;
        check(self.f >= 0.0 && self.f.is_finite(), "f", "f ≥ 0")?;
        check(self.u >= 0.0 && self.u.is_finite(), "u", "u ≥ 0")?;
        check(self.c.is_finite(), "c", "c finite")?;
        check(self.s >= 0.0 && self.s.is_finite(), "s", "s ≥ 0")?;
        check(self.delta > 0.0 && self.delta <= 1.0, "delta", "0 < δ ≤ 1")?;
        check(self.n >= 2, "n", "N ≥ 2")?;
        Ok(())
    }

    /// N − 1, the number of potential victims for any robber.
    pub fn others(&self) -> f64 {
        f64::from(self.n) - 1.0
    }
}

/// Utility gained from a theft outside the attacked ledger, and its cost.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExogenousParams {
    pub u_e: f64,
    pub c_e: f64,
}

impl ExogenousParams {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.u_e >= 0.0 && self.u_e.is_finite()) {
            return Err(ValidationError::new("u_e", "u_e ≥ 0"));
        }
        if !(self.c_e >= 0.0 && self.c_e.is_finite()) {
            return Err(ValidationError::new("c_e", "c_e ≥ 0"));
        }
        Ok(())
    }
}

/// What happens to the attacked ledger after a theft.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LedgerFate {
    Survives,
    Collapses,
    Rewritten,
}

impl LedgerFate {
    pub const ALL: [LedgerFate; 3] = [LedgerFate::Survives, LedgerFate::Collapses, LedgerFate::Rewritten];

    /// 1 = rewritten, 2 = collapsed, 3 = survived unreverted.
    pub fn scenario_id(self) -> u8 {
        match self {
            LedgerFate::Rewritten => 1,
            LedgerFate::Collapses => 2,
            LedgerFate::Survives => 3,
        }
    }
}

/// Identifies each condition the crate evaluates, with its relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    RandomTargetDeterrence,
    SingleUnitTheft,
    InformedTheftBenefit,
    GoodsTheftSustainable,
    TokenTheftSustainable,
    CreditTheftTempting,
    CreditSurplus,
    CreditDynamic,
    ExchangeValue,
    MoneyTheftBenefit,
    ExogenousTheftBenefit,
    ExogenousSustainable,
    MevProfitable,
}

impl Condition {
    pub fn relation(self) -> &'static str {
        match self {
            Condition::RandomTargetDeterrence => "alpha*epsilon*f/(n-1) < c",
            Condition::SingleUnitTheft => "alpha*upsilon/(n-1) > c",
            Condition::InformedTheftBenefit => "alpha*upsilon - c",
            Condition::GoodsTheftSustainable => "alpha*epsilon*f - c <= 0",
            Condition::TokenTheftSustainable => "alpha*u - c <= 0",
            Condition::CreditTheftTempting => "alpha*upsilon - c >= 0",
            Condition::CreditSurplus => "u - alpha*f - s + alpha*upsilon - c >= 0",
            Condition::CreditDynamic => {
                "(u - alpha*f - s + alpha*upsilon - c)/(delta*n) >= s - alpha*upsilon/(n-1)"
            }
            Condition::ExchangeValue => "(u - s - alpha*upsilon - c)/(delta*n)",
            Condition::MoneyTheftBenefit => "alpha*u - c",
            Condition::ExogenousTheftBenefit => "alpha*(gain + u_e) - (c + c_e)",
            Condition::ExogenousSustainable => "alpha*(upsilon + u_e) - (c + c_e) <= 0",
            Condition::MevProfitable => "extraction - (gas + bid) > 0",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.relation())
    }
}

/// A benefit value together with the conditions that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheftEvaluation {
    pub benefit: f64,
    pub attractive: bool,
    pub condition_refs: Vec<Condition>,
}

impl TheftEvaluation {
    pub fn new(benefit: f64, condition_refs: Vec<Condition>) -> Self {
        TheftEvaluation {
            benefit,
            attractive: benefit > 0.0,
            condition_refs,
        }
    }
}

/// Random-target theft is deterred: `α·ε·f/(N−1) < c`.
pub fn random_theft_deterred(p: &ModelParams) -> bool {
    p.alpha * p.epsilon * p.f / p.others() < p.c
}

/// The robber's valuation of one stolen token given the ledger's fate.
///
/// A rewritten theft is worth nothing to the robber, same as a collapse.
pub fn resolve_upsilon(u: f64, fate: LedgerFate) -> f64 {
    match fate {
        LedgerFate::Survives => u,
        LedgerFate::Collapses | LedgerFate::Rewritten => 0.0,
    }
}

/// Valuation of `t` stolen tokens: all of `t·u` or nothing.
pub fn resolve_mu(t: u64, u: f64, fate: LedgerFate) -> f64 {
    match fate {
        LedgerFate::Survives => t as f64 * u,
        LedgerFate::Collapses | LedgerFate::Rewritten => 0.0,
    }
}

/// Single-unit token theft is worthwhile against a random target: `α·υ/(N−1) > c`.
pub fn crypto_theft_condition(p: &ModelParams, upsilon: f64) -> bool {
    p.alpha * upsilon / p.others() > p.c
}

/// Expected benefit of stealing from a *known* holder: `α·υ − c`.
pub fn crypto_theft_benefit(p: &ModelParams, upsilon: f64) -> f64 {
    p.alpha * upsilon - p.c
}

/// Full information without goods theft is sustainable: `α·ε·f − c ≤ 0`.
pub fn full_info_sustainable_goods(p: &ModelParams) -> bool {
    p.alpha * p.epsilon * p.f - p.c <= 0.0
}

/// Full information without token theft is sustainable: `α·u − c ≤ 0`.
///
/// This holds only when `c` is at least `α·u`, i.e. when the attempt is
/// sufficiently *expensive*. Negative `c` makes it strictly harder to satisfy.
pub fn full_info_sustainable_crypto(p: &ModelParams) -> bool {
    p.alpha * p.u - p.c <= 0.0
}

/// The three conditions for a pure credit equilibrium with theft.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CreditConditions {
    /// `α·υ − c`
    pub theft_margin: f64,
    /// `u − α·f − s + α·υ − c`
    pub surplus: f64,
    /// `surplus / (δ·N)`
    pub continuation: f64,
    /// `s − α·υ/(N−1)`
    pub defection_gain: f64,
    pub cond_theft_tempting: bool,
    pub cond_surplus: bool,
    pub cond_dynamic: bool,
    pub all: bool,
}

pub fn credit_equilibrium_sustainable(p: &ModelParams, upsilon: f64) -> CreditConditions {
    let theft_margin = p.alpha * upsilon - p.c;
    let surplus = p.u - p.alpha * p.f - p.s + p.alpha * upsilon - p.c;
    let continuation = surplus / (p.delta * f64::from(p.n));
    let defection_gain = p.s - p.alpha * upsilon / p.others();
    let cond_theft_tempting = theft_margin >= 0.0;
    let cond_surplus = surplus >= 0.0;
    let cond_dynamic = continuation >= defection_gain;
    CreditConditions {
        theft_margin,
        surplus,
        continuation,
        defection_gain,
        cond_theft_tempting,
        cond_surplus,
        cond_dynamic,
        all: cond_theft_tempting && cond_surplus && cond_dynamic,
    }
}

/// `(u − s − α·υ − c)/(δ·N)`.
///
/// Note the sign of `α·υ` is the opposite of the one in the credit surplus
/// used by [`credit_equilibrium_sustainable`]; both are kept deliberately.
pub fn expected_value_of_exchange(p: &ModelParams, upsilon: f64) -> f64 {
    (p.u - p.s - p.alpha * upsilon - p.c) / (p.delta * f64::from(p.n))
}

/// Stolen money stays fungible, so its full utility is at stake: `α·u − c`.
pub fn money_theft_benefit(p: &ModelParams) -> f64 {
    p.alpha * p.u - p.c
}

/// `α·(gain + u_e) − (c + c_e)`, where `gain` is an already-resolved υ or μ.
pub fn exogenous_theft_benefit(p: &ModelParams, exo: &ExogenousParams, endogenous_gain: f64) -> f64 {
    p.alpha * (endogenous_gain + exo.u_e) - (p.c + exo.c_e)
}

/// `α·(υ + u_e) − (c + c_e) ≤ 0`.
pub fn exogenous_sustainable(p: &ModelParams, exo: &ExogenousParams, upsilon: f64) -> bool {
    exogenous_theft_benefit(p, exo, upsilon) <= 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub mu: f64,
    pub net: f64,
    pub scenario_id: u8,
}

/// Realized outcome of a theft of `t` tokens once the ledger's fate is known.
/// The theft has happened, so success is certain and α plays no part.
pub fn scenario_outcome(
    fate: LedgerFate,
    t: u64,
    u: f64,
    exo: &ExogenousParams,
    p: &ModelParams,
) -> ScenarioOutcome {
    let mu = resolve_mu(t, u, fate);
    ScenarioOutcome {
        mu,
        net: (mu + exo.u_e) - (p.c + exo.c_e),
        scenario_id: fate.scenario_id(),
    }
}

/// A winning bid makes ordering certain, so α = 1 and the attack pays iff
/// `extraction − (gas + bid) > 0`.
pub fn mev_profitable(expected_extraction: f64, gas: f64, bid: f64) -> bool {
    expected_extraction - (gas + bid) > 0.0
}
