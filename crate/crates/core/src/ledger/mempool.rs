//! Constant-product pool and the sandwich attack on a pending swap.
//!
//! Pending transactions are public, so an attacker who wins the ordering bid
//! can place a buy immediately before a victim's swap and a sell immediately
//! after it. The only defence modelled is the victim's minimum-output bound:
//! if the front-run pushes the victim's fill below it, the victim's swap is
//! cancelled and the attacker is left holding gas and bid costs.

use serde::{Deserialize, Serialize};

use crate::error::PoolError;
use crate::ledger::AccountId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    XToY,
    YToX,
}

impl Side {
    pub fn reverse(self) -> Side {
        match self {
            Side::XToY => Side::YToX,
            Side::YToX => Side::XToY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapOrder {
    pub trader: AccountId,
    pub amount_in: f64,
    /// Slippage control: the swap is cancelled if it would pay out less.
    pub min_out: f64,
    pub side: Side,
}

impl SwapOrder {
    pub fn new(trader: AccountId, side: Side, amount_in: f64, min_out: f64) -> Result<Self, PoolError> {
        if !(amount_in > 0.0 && amount_in.is_finite()) {
            return Err(PoolError::InvalidAmount(amount_in));
        }
        if !(min_out >= 0.0 && min_out.is_finite()) {
            return Err(PoolError::InvalidAmount(min_out));
        }
        Ok(SwapOrder {
            trader,
            amount_in,
            min_out,
            side,
        })
    }
}

/// Reserves of an `x·y = k` pool with no fee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolState {
    pub reserve_x: f64,
    pub reserve_y: f64,
    pub k: f64,
}

impl PoolState {
    pub fn new(reserve_x: f64, reserve_y: f64) -> Result<Self, PoolError> {
        let valid = |r: f64| r > 0.0 && r.is_finite();
        if !valid(reserve_x) || !valid(reserve_y) {
            return Err(PoolError::EmptyPool);
        }
        Ok(PoolState {
            reserve_x,
            reserve_y,
            k: reserve_x * reserve_y,
        })
    }

    fn reserves(&self, side: Side) -> (f64, f64) {
        match side {
            Side::XToY => (self.reserve_x, self.reserve_y),
            Side::YToX => (self.reserve_y, self.reserve_x),
        }
    }

    /// Output of selling `amount_in` without touching the pool.
    pub fn quote(&self, side: Side, amount_in: f64) -> Result<f64, PoolError> {
        self.swap(side, amount_in).map(|(_, out)| out)
    }

    /// Sells `amount_in` of the input asset. Returns the new pool and the
    /// output amount `reserve_out − k/(reserve_in + amount_in)`.
    pub fn swap(&self, side: Side, amount_in: f64) -> Result<(PoolState, f64), PoolError> {
        if !(self.reserve_x > 0.0 && self.reserve_y > 0.0) {
            return Err(PoolError::EmptyPool);
        }
        if !(amount_in >= 0.0 && amount_in.is_finite()) {
            return Err(PoolError::InvalidAmount(amount_in));
        }
        let (r_in, r_out) = self.reserves(side);
        let new_in = r_in + amount_in;
        let new_out = self.k / new_in;
        let out = r_out - new_out;
        let next = match side {
            Side::XToY => PoolState {
                reserve_x: new_in,
                reserve_y: new_out,
                k: self.k,
            },
            Side::YToX => PoolState {
                reserve_x: new_out,
                reserve_y: new_in,
                k: self.k,
            },
        };
        Ok((next, out))
    }

    /// Executes `order`, enforcing its minimum output.
    pub fn execute(&self, order: &SwapOrder) -> Result<(PoolState, f64), PoolError> {
        let (next, out) = self.swap(order.side, order.amount_in)?;
        if out < order.min_out {
            return Err(PoolError::SlippageExceeded {
                out,
                min_out: order.min_out,
            });
        }
        Ok((next, out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackStatus {
    Executed,
    VictimCancelled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackResult {
    pub status: AttackStatus,
    /// Net of gas and bid, in units of the victim's input asset.
    pub attacker_profit: f64,
    /// Victim's fill; zero when the swap was cancelled.
    pub victim_received: f64,
    /// Attacker's gross gain before gas and bid.
    pub extraction: f64,
    pub pool_after: PoolState,
}

/// Front-runs `victim` with `frontrun_amount` on the same side, lets the
/// victim trade, then sells everything the front-run bought.
///
/// If the victim's swap would breach its minimum output it is cancelled and
/// the attacker unwinds at the pre-victim price, so the attacker can only
/// lose `gas + bid`.
pub fn sandwich_attack(
    pool: &PoolState,
    victim: &SwapOrder,
    frontrun_amount: f64,
    gas: f64,
    bid: f64,
) -> Result<AttackResult, PoolError> {
    if !(frontrun_amount >= 0.0 && frontrun_amount.is_finite()) {
        return Err(PoolError::InvalidAmount(frontrun_amount));
    }
    let costs = gas + bid;
    let (after_front, bought) = pool.swap(victim.side, frontrun_amount)?;
    match after_front.execute(victim) {
        Ok((after_victim, victim_received)) => {
            let (pool_after, proceeds) = after_victim.swap(victim.side.reverse(), bought)?;
            let extraction = proceeds - frontrun_amount;
            Ok(AttackResult {
                status: AttackStatus::Executed,
                attacker_profit: extraction - costs,
                victim_received,
                extraction,
                pool_after,
            })
        }
        Err(PoolError::SlippageExceeded { .. }) => {
            let (pool_after, proceeds) = after_front.swap(victim.side.reverse(), bought)?;
            let extraction = (proceeds - frontrun_amount).min(0.0);
            Ok(AttackResult {
                status: AttackStatus::VictimCancelled,
                attacker_profit: extraction - costs,
                victim_received: 0.0,
                extraction,
                pool_after,
            })
        }
        Err(e) => Err(e),
    }
}

/// Front-run size that leaves a victim selling `victim_in` with exactly
/// `target_out`.
///
/// After a front-run of `a` the victim receives `k·v / (z·(z + v))` with
/// `z = reserve_in + a`, so `z` is the positive root of
/// `z² + v·z − k·v/target = 0`.
pub fn calibrate_frontrun(pool: &PoolState, side: Side, victim_in: f64, target_out: f64) -> Result<f64, PoolError> {
    if !(victim_in > 0.0 && victim_in.is_finite()) {
        return Err(PoolError::InvalidAmount(victim_in));
    }
    let unattacked = pool.quote(side, victim_in)?;
    if !(target_out > 0.0 && target_out <= unattacked) {
        return Err(PoolError::InvalidAmount(target_out));
    }
    let (r_in, _) = pool.reserves(side);
    let v = victim_in;
    let z = (-v + (v * v + 4.0 * pool.k * v / target_out).sqrt()) / 2.0;
    Ok((z - r_in).max(0.0))
}
