use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, LedgerFate};
use crate::engine::config::{CycleConfig, Mode};
use crate::engine::policy::{
    self, consumer_policy, supplier_policy, ConsumerChoice, LedgerView, Observations, RobberTarget,
    SupplierAction,
};
use crate::error::SimError;
use crate::ledger::{AccountId, LedgerState};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentState {
    pub id: u32,
    /// Received a good this cycle.
    pub has_good: bool,
    /// Units of money held, 0 or 1.
    pub money: u8,
    /// Identity publicly revealed by a credit purchase this cycle.
    pub revealed: bool,
    /// Excluded from all trade after a public defection.
    pub autarkic: bool,
    /// Agents this one no longer trades credit with after a bilateral defection.
    pub severed: BTreeSet<u32>,
    pub reduced_to_money_only: bool,
}

impl AgentState {
    pub fn new(id: u32) -> Self {
        AgentState {
            id,
            has_good: false,
            money: 0,
            revealed: false,
            autarkic: false,
            severed: BTreeSet::new(),
            reduced_to_money_only: false,
        }
    }
}

/// A theft attempt as it played out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheftRecord {
    pub robber: u32,
    pub victim: u32,
    pub informed: bool,
    pub success: bool,
    /// Present for successful ledger thefts.
    pub fate: Option<LedgerFate>,
    pub payoff: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CycleRecord {
    pub cycle: u64,
    pub participants: u32,
    pub trades: u64,
    pub money_trades: u64,
    pub credit_trades: u64,
    /// Credit trades by consumers who held money at the time.
    pub money_holder_credit_trades: u64,
    pub defections: u64,
    pub theft: Option<TheftRecord>,
    pub money_total: u64,
    pub collapsed: bool,
}

/// One trial's evolving state.
#[derive(Debug, Clone)]
pub struct SimState {
    pub cycle: u64,
    pub agents: Vec<AgentState>,
    pub ledger: Option<LedgerState>,
    pub collapse_cycle: Option<u64>,
    important: BTreeSet<AccountId>,
}

impl SimState {
    pub fn new(config: &CycleConfig) -> Result<Self, SimError> {
        config.validate()?;
        let n = config.params.n;
        let m = config.money_supply();
        let mut agents: Vec<AgentState> = (0..n).map(AgentState::new).collect();
        let important: BTreeSet<AccountId> =
            config.economy.important.iter().map(|&i| AccountId(u64::from(i))).collect();
        let mut ledger = None;
        match config.mode {
            Mode::CryptoLedger => {
                let accounts = (0..n).map(|i| {
                    let id = AccountId(u64::from(i));
                    let balance = if i < m { config.economy.initial_balance } else { 0 };
                    (id, balance, important.contains(&id))
                });
                ledger = Some(LedgerState::genesis(accounts)?);
            }
            mode if mode.has_money() => {
                for a in agents.iter_mut().take(m as usize) {
                    a.money = 1;
                }
            }
            _ => {}
        }
        Ok(SimState {
            cycle: 0,
            agents,
            ledger,
            collapse_cycle: None,
            important,
        })
    }

    pub fn money_total(&self) -> u64 {
        self.agents.iter().map(|a| u64::from(a.money)).sum()
    }

    pub fn is_terminated(&self) -> bool {
        self.collapse_cycle.is_some()
    }

    /// Utility an agent's token holdings are worth: nothing once the ledger
    /// has collapsed.
    pub fn holding_value(&self, agent: u32, u: f64) -> f64 {
        let Some(ledger) = &self.ledger else { return 0.0 };
        let balance = ledger.balance(AccountId(u64::from(agent))).unwrap_or(0);
        let fate = if ledger.is_collapsed() {
            LedgerFate::Collapses
        } else {
            LedgerFate::Survives
        };
        analytic::resolve_mu(balance, u, fate)
    }

    /// Per-unit υ suppliers price in: the good's εf in goods economies; on a
    /// ledger, u while a one-token theft from an ordinary account would
    /// stand and 0 once it would trigger collapse.
    fn upsilon(&self, config: &CycleConfig) -> f64 {
        let p = &config.params;
        match &self.ledger {
            None => p.epsilon * p.f,
            Some(ledger) => {
                let stolen = (ledger.outstanding_stolen() + config.economy.theft_size) as f64;
                let supply = ledger.total_supply().max(1) as f64;
                if stolen / supply >= config.collapse_rule.theta {
                    0.0
                } else {
                    p.u
                }
            }
        }
    }
}

/// Advances `state` by one cycle: sample participants, match and trade,
/// let one robber act, then apply the collapse rule.
pub fn run_cycle<R: Rng + ?Sized>(
    state: &mut SimState,
    config: &CycleConfig,
    rng: &mut R,
) -> Result<CycleRecord, SimError> {
    if let Some(at) = state.collapse_cycle {
        return Err(SimError::Terminated(at));
    }
    let (mut record, participants) = trade_phase(state, config, rng)?;
    if !participants.is_empty() {
        let robber = participants[rng.gen_range(0..participants.len())];
        if let Some(target) = choose_target(state, config, robber, true, rng) {
            record.theft = Some(resolve_theft(state, config, robber, target, rng)?);
        }
    }
    record.money_total = state.money_total();
    record.collapsed = state.collapse_cycle.is_some();
    Ok(record)
}

/// Trading half of a cycle. Returns the cycle record so far and the cycle's
/// participants in matching order.
pub(crate) fn trade_phase<R: Rng + ?Sized>(
    state: &mut SimState,
    config: &CycleConfig,
    rng: &mut R,
) -> Result<(CycleRecord, Vec<u32>), SimError> {
    state.cycle += 1;
    let cycle = state.cycle;
    if let Some(ledger) = state.ledger.as_mut() {
        ledger.set_cycle(cycle);
    }
    for a in &mut state.agents {
        a.has_good = false;
        a.revealed = false;
    }

    let participation = config.economy.participation;
    let mut participants: Vec<u32> = state
        .agents
        .iter()
        .filter(|_| rng.gen::<f64>() < participation)
        .map(|a| a.id)
        .collect();
    participants.shuffle(rng);

    let mut record = CycleRecord {
        cycle,
        participants: participants.len() as u32,
        ..CycleRecord::default()
    };
    let upsilon = state.upsilon(config);
    for pair in participants.chunks_exact(2) {
        let (consumer, supplier) = if rng.gen::<bool>() {
            (pair[0], pair[1])
        } else {
            (pair[1], pair[0])
        };
        settle(state, config, consumer, supplier, upsilon, &mut record)?;
    }
    Ok((record, participants))
}

/// Picks the robber's victim from what the mode lets it observe. With
/// `gated` the choice goes through [`policy::robber_policy`]; without it the
/// robber attempts regardless of expected benefit.
pub(crate) fn choose_target<R: Rng + ?Sized>(
    state: &SimState,
    config: &CycleConfig,
    robber: u32,
    gated: bool,
    rng: &mut R,
) -> Option<RobberTarget> {
    let (p, exo) = (&config.params, &config.exo);
    let pick = |obs: Observations<'_>, rng: &mut R| {
        if gated {
            policy::robber_policy(robber, p, exo, obs, rng)
        } else {
            policy::select_target(robber, p, exo, obs, rng)
        }
    };
    match config.mode {
        Mode::CryptoLedger => {
            let ledger = state.ledger.as_ref()?;
            let balances = ledger.visible_balances(AccountId(u64::from(robber)));
            let view = LedgerView {
                balances: &balances,
                important: &state.important,
                theft_size: config.economy.theft_size,
                outstanding_stolen: ledger.outstanding_stolen(),
                total_supply: ledger.total_supply(),
                rule: config.collapse_rule,
            };
            pick(Observations::Ledger(view), rng)
        }
        Mode::FullInfo23 | Mode::MoneyOrFullInfo33 => {
            let known: Vec<u32> = state
                .agents
                .iter()
                .filter(|a| a.revealed && a.has_good && a.id != robber)
                .map(|a| a.id)
                .collect();
            if !known.is_empty() {
                pick(Observations::KnownRecipients(&known), rng)
            } else if config.mode == Mode::MoneyOrFullInfo33 {
                // Money purchases are anonymous, so fall back to guessing.
                pick(Observations::Oblivious, rng)
            } else {
                // Every recipient is public and there are none this cycle.
                None
            }
        }
        Mode::Bilateral22 | Mode::MoneySemianon31 | Mode::MoneyOrBilateral32 => {
            pick(Observations::Oblivious, rng)
        }
    }
}

fn settle(
    state: &mut SimState,
    config: &CycleConfig,
    consumer: u32,
    supplier: u32,
    upsilon: f64,
    record: &mut CycleRecord,
) -> Result<(), SimError> {
    let (ci, si) = (consumer as usize, supplier as usize);
    if state.agents[ci].autarkic || state.agents[si].autarkic {
        return Ok(());
    }
    let p = &config.params;
    match consumer_policy(config.mode, &state.agents[ci], p) {
        ConsumerChoice::Abstain => {}
        ConsumerChoice::UseMoney => {
            // A supplier cannot hold a second unit.
            if state.agents[si].money == 0 {
                state.agents[ci].money = 0;
                state.agents[si].money = 1;
                state.agents[ci].has_good = true;
                record.trades += 1;
                record.money_trades += 1;
            }
        }
        ConsumerChoice::UseCredit => {
            let s = &state.agents[si];
            if s.reduced_to_money_only || s.severed.contains(&consumer) {
                return Ok(());
            }
            let price = config.economy.price;
            if let Some(ledger) = &state.ledger {
                if ledger.balance(AccountId(u64::from(consumer)))? < price {
                    return Ok(());
                }
            }
            match supplier_policy(p, upsilon) {
                SupplierAction::Supply => {
                    if let Some(ledger) = state.ledger.as_mut() {
                        ledger.transfer(AccountId(u64::from(consumer)), AccountId(u64::from(supplier)), price)?;
                    }
                    let holds_money = state.agents[ci].money == 1;
                    let c = &mut state.agents[ci];
                    c.has_good = true;
                    c.revealed = config.mode.credit_is_public();
                    record.trades += 1;
                    record.credit_trades += 1;
                    if holds_money {
                        record.money_holder_credit_trades += 1;
                    }
                }
                SupplierAction::Defect => {
                    record.defections += 1;
                    match config.mode {
                        Mode::FullInfo23 | Mode::CryptoLedger => state.agents[si].autarkic = true,
                        Mode::MoneyOrFullInfo33 => state.agents[si].reduced_to_money_only = true,
                        Mode::Bilateral22 | Mode::MoneyOrBilateral32 => {
                            state.agents[si].severed.insert(consumer);
                            state.agents[ci].severed.insert(supplier);
                        }
                        Mode::MoneySemianon31 => {}
                    }
                }
            }
        }
    }
    Ok(())
}

/// Executes an attempt against `target` and applies the collapse rule.
pub(crate) fn resolve_theft<R: Rng + ?Sized>(
    state: &mut SimState,
    config: &CycleConfig,
    robber: u32,
    target: RobberTarget,
    rng: &mut R,
) -> Result<TheftRecord, SimError> {
    let p = &config.params;
    let exo = &config.exo;
    let failed = -(p.c + exo.c_e);
    let mut record = TheftRecord {
        robber,
        victim: target.victim,
        informed: target.informed,
        success: false,
        fate: None,
        payoff: failed,
    };
    let Some(ledger) = state.ledger.as_mut() else {
        // Goods theft: succeeds with probability α iff the victim holds a good.
        let lucky = rng.gen::<f64>() < p.alpha;
        let victim = &mut state.agents[target.victim as usize];
        if lucky && victim.has_good {
            victim.has_good = false;
            record.success = true;
            record.payoff = p.epsilon * p.f - p.c;
        }
        return Ok(record);
    };

    let t = config.economy.theft_size;
    let robber_id = AccountId(u64::from(robber));
    let victim_id = AccountId(u64::from(target.victim));
    let outcome = ledger.steal(robber_id, victim_id, t, p.alpha, rng)?;
    if !outcome.success {
        return Ok(record);
    }
    let rule = config.collapse_rule;
    let fate = if state.important.contains(&victim_id) && rng.gen::<f64>() < rule.p_r {
        ledger.governance_rewrite(outcome.event)?;
        LedgerFate::Rewritten
    } else if ledger.outstanding_stolen() as f64 / ledger.total_supply().max(1) as f64 >= rule.theta {
        ledger.collapse();
        state.collapse_cycle = Some(state.cycle);
        LedgerFate::Collapses
    } else {
        LedgerFate::Survives
    };
    record.success = true;
    record.fate = Some(fate);
    record.payoff = analytic::scenario_outcome(fate, t, p.u, exo, p).net;
    Ok(record)
}
