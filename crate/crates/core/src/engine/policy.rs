//! One-shot rational policies for consumers, suppliers and robbers.
//!
//! Agents do not plan. Each decision compares closed-form one-shot payoffs,
//! with the supplier's continuation value taken from the credit-equilibrium
//! dynamic condition. Ties never trigger an attack.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, ExogenousParams, ModelParams};
use crate::engine::config::{CollapseRule, Mode};
use crate::engine::state::AgentState;
use crate::ledger::AccountId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConsumerChoice {
    UseMoney,
    UseCredit,
    Abstain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupplierAction {
    Supply,
    Defect,
}

/// Money costs `s`; credit additionally exposes the buyer to theft worth `α·f`.
/// Money wins ties because it reveals nothing.
pub fn consumer_policy(mode: Mode, agent: &AgentState, p: &ModelParams) -> ConsumerChoice {
    if agent.autarkic {
        return ConsumerChoice::Abstain;
    }
    let money_value = p.u - p.s;
    let credit_value = p.u - p.s - p.alpha * p.f;
    let money = mode.has_money() && agent.money == 1 && money_value > 0.0;
    let credit = mode.has_credit() && !agent.reduced_to_money_only && credit_value > 0.0;
    match (money, credit) {
        (true, true) if money_value >= credit_value => ConsumerChoice::UseMoney,
        (true, true) => ConsumerChoice::UseCredit,
        (true, false) => ConsumerChoice::UseMoney,
        (false, true) => ConsumerChoice::UseCredit,
        (false, false) => ConsumerChoice::Abstain,
    }
}

/// Supplies in a credit trade when the dynamic credit condition holds, i.e.
/// the continuation value of good standing covers the one-shot gain from
/// defecting. With `s = 0` defection gains nothing, so the supplier supplies.
pub fn supplier_policy(p: &ModelParams, upsilon: f64) -> SupplierAction {
    if p.s == 0.0 || analytic::credit_equilibrium_sustainable(p, upsilon).cond_dynamic {
        SupplierAction::Supply
    } else {
        SupplierAction::Defect
    }
}

/// What a robber can see when choosing a victim.
#[derive(Debug, Clone, Copy)]
pub enum Observations<'a> {
    /// Holdings are private; only the population size is known.
    Oblivious,
    /// Agents publicly known to hold a good this cycle.
    KnownRecipients(&'a [u32]),
    /// Every ledger balance, plus what the robber needs to price collapse
    /// and rewrite risk.
    Ledger(LedgerView<'a>),
}

#[derive(Debug, Clone, Copy)]
pub struct LedgerView<'a> {
    pub balances: &'a BTreeMap<AccountId, u64>,
    pub important: &'a BTreeSet<AccountId>,
    pub theft_size: u64,
    pub outstanding_stolen: u64,
    pub total_supply: u64,
    pub rule: CollapseRule,
}

impl LedgerView<'_> {
    /// Probability a theft of `theft_size` from `victim` stands: no rewrite,
    /// and outstanding stolen tokens stay below the collapse threshold.
    pub fn survival_probability(&self, victim: AccountId) -> f64 {
        let stolen = (self.outstanding_stolen + self.theft_size) as f64;
        let supply = self.total_supply.max(1) as f64;
        if stolen / supply >= self.rule.theta {
            return 0.0;
        }
        if self.important.contains(&victim) {
            1.0 - self.rule.p_r
        } else {
            1.0
        }
    }

    /// Largest holder other than `robber`; ties go to unimportant accounts,
    /// then to the lowest id.
    pub fn richest_other(&self, robber: AccountId) -> Option<(AccountId, u64)> {
        self.balances
            .iter()
            .filter(|(id, _)| **id != robber)
            .max_by(|(ia, ba), (ib, bb)| {
                ba.cmp(bb)
                    .then_with(|| self.important.contains(ib).cmp(&self.important.contains(ia)))
                    .then_with(|| ib.cmp(ia))
            })
            .map(|(id, b)| (*id, *b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobberTarget {
    pub victim: u32,
    /// Whether the victim was picked from public information.
    pub informed: bool,
    /// Robber's expected benefit of the attempt.
    pub expected_benefit: f64,
}

/// Chooses this cycle's victim, or `None` if no attempt is worthwhile.
pub fn robber_policy<R: Rng + ?Sized>(
    robber: u32,
    p: &ModelParams,
    exo: &ExogenousParams,
    observations: Observations<'_>,
    rng: &mut R,
) -> Option<RobberTarget> {
    select_target(robber, p, exo, observations, rng).filter(|t| t.expected_benefit > 0.0)
}

/// Target selection without the profitability gate.
pub(crate) fn select_target<R: Rng + ?Sized>(
    robber: u32,
    p: &ModelParams,
    exo: &ExogenousParams,
    observations: Observations<'_>,
    rng: &mut R,
) -> Option<RobberTarget> {
    match observations {
        Observations::Oblivious => random_target(robber, p, rng),
        Observations::KnownRecipients(known) => {
            let candidates: Vec<u32> = known.iter().copied().filter(|&a| a != robber).collect();
            if candidates.is_empty() {
                return random_target(robber, p, rng);
            }
            let victim = candidates[rng.gen_range(0..candidates.len())];
            Some(RobberTarget {
                victim,
                informed: true,
                expected_benefit: p.alpha * p.epsilon * p.f - p.c,
            })
        }
        Observations::Ledger(view) => {
            let (victim, balance) = view.richest_other(AccountId(u64::from(robber)))?;
            if balance < view.theft_size {
                return None;
            }
            let upsilon_hat = p.u * view.survival_probability(victim);
            let gain = view.theft_size as f64 * upsilon_hat;
            Some(RobberTarget {
                victim: victim.0 as u32,
                informed: true,
                expected_benefit: analytic::exogenous_theft_benefit(p, exo, gain),
            })
        }
    }
}

fn random_target<R: Rng + ?Sized>(robber: u32, p: &ModelParams, rng: &mut R) -> Option<RobberTarget> {
    // Uniform over the N − 1 other agents.
    let mut victim = rng.gen_range(0..p.n - 1);
    if victim >= robber {
        victim += 1;
    }
    Some(RobberTarget {
        victim,
        informed: false,
        expected_benefit: p.alpha * p.epsilon * p.f / p.others() - p.c,
    })
}
