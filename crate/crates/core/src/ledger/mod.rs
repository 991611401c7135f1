//! Account-based token ledger with theft, governance rewrite and collapse.
//!
//! Balances are fully visible to every observer. The event log is append-only:
//! a rewrite restores balances but is itself recorded, so the history of the
//! theft is never erased.

pub mod mempool;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::LedgerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AccountId(pub u64);

impl fmt::Display for AccountId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Account {
    pub id: AccountId,
    pub balance: u64,
    /// Foundation, community pool or similar: governance is likely to reverse
    /// thefts from these.
    pub important: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Mint,
    Transfer,
    Attempt,
    Theft,
    Rewrite,
    Collapse,
}

/// One line of the exported event log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    pub kind: EventKind,
    pub from: Option<AccountId>,
    pub to: Option<AccountId>,
    pub amount: u64,
    pub cycle: u64,
}

/// Balances of the two parties immediately before a theft.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheftSnapshot {
    pub robber: AccountId,
    pub victim: AccountId,
    pub amount: u64,
    pub robber_before: u64,
    pub victim_before: u64,
    pub rewritten_by: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StealOutcome {
    pub success: bool,
    /// Sequence number of the `Theft` or `Attempt` event.
    pub event: u64,
}

#[derive(Debug, Clone, Default)]
pub struct LedgerState {
    accounts: BTreeMap<AccountId, Account>,
    total_supply: u64,
    collapsed: bool,
    history: Vec<Event>,
    thefts: BTreeMap<u64, TheftSnapshot>,
    cycle: u64,
}

impl LedgerState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a ledger from `(id, balance, important)` triples, minting each balance.
    pub fn genesis<I>(accounts: I) -> Result<Self, LedgerError>
    where
        I: IntoIterator<Item = (AccountId, u64, bool)>,
    {
        let mut ledger = Self::new();
        for (id, balance, important) in accounts {
            ledger.open_account(id, balance, important)?;
        }
        Ok(ledger)
    }

    /// Opens a new account holding `balance` freshly minted tokens.
    pub fn open_account(&mut self, id: AccountId, balance: u64, important: bool) -> Result<(), LedgerError> {
        self.ensure_live()?;
        if self.accounts.contains_key(&id) {
            return Err(LedgerError::DuplicateAccount(id));
        }
        self.accounts.insert(id, Account { id, balance, important });
        self.total_supply += balance;
        self.push(EventKind::Mint, None, Some(id), balance);
        Ok(())
    }

    /// Stamps subsequent events with `cycle`.
    pub fn set_cycle(&mut self, cycle: u64) {
        self.cycle = cycle;
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn total_supply(&self) -> u64 {
        self.total_supply
    }

    pub fn is_collapsed(&self) -> bool {
        self.collapsed
    }

    pub fn history(&self) -> &[Event] {
        &self.history
    }

    pub fn account(&self, id: AccountId) -> Option<&Account> {
        self.accounts.get(&id)
    }

    pub fn accounts(&self) -> impl Iterator<Item = &Account> {
        self.accounts.values()
    }

    pub fn balance(&self, id: AccountId) -> Result<u64, LedgerError> {
        self.accounts
            .get(&id)
            .map(|a| a.balance)
            .ok_or(LedgerError::UnknownAccount(id))
    }

    pub fn sum_balances(&self) -> u64 {
        self.accounts.values().map(|a| a.balance).sum()
    }

    pub fn theft(&self, seq: u64) -> Option<&TheftSnapshot> {
        self.thefts.get(&seq)
    }

    /// Tokens stolen and not (yet) returned by a rewrite.
    pub fn outstanding_stolen(&self) -> u64 {
        self.thefts
            .values()
            .filter(|t| t.rewritten_by.is_none())
            .map(|t| t.amount)
            .sum()
    }

    pub fn transfer(&mut self, from: AccountId, to: AccountId, amount: u64) -> Result<u64, LedgerError> {
        self.ensure_live()?;
        let balance = self.balance(from)?;
        self.balance(to)?;
        if balance < amount {
            return Err(LedgerError::InsufficientBalance {
                account: from,
                balance,
                needed: amount,
            });
        }
        self.move_tokens(from, to, amount);
        Ok(self.push(EventKind::Transfer, Some(from), Some(to), amount))
    }

    /// One theft attempt of `amount` tokens.
    ///
    /// A uniform draw is always consumed from `rng`, so the random stream does
    /// not depend on the victim's balance. The attempt succeeds when the draw
    /// falls below `alpha` and the victim holds at least `amount`.
    pub fn steal<R: Rng + ?Sized>(
        &mut self,
        robber: AccountId,
        victim: AccountId,
        amount: u64,
        alpha: f64,
        rng: &mut R,
    ) -> Result<StealOutcome, LedgerError> {
        self.ensure_live()?;
        let robber_before = self.balance(robber)?;
        let victim_before = self.balance(victim)?;
        let lucky = rng.gen::<f64>() < alpha;
        if !lucky || victim_before < amount || robber == victim {
            let event = self.push(EventKind::Attempt, Some(victim), Some(robber), amount);
            return Ok(StealOutcome { success: false, event });
        }
        self.move_tokens(victim, robber, amount);
        let event = self.push(EventKind::Theft, Some(victim), Some(robber), amount);
        self.thefts.insert(
            event,
            TheftSnapshot {
                robber,
                victim,
                amount,
                robber_before,
                victim_before,
                rewritten_by: None,
            },
        );
        Ok(StealOutcome { success: true, event })
    }

    /// Reverses the theft recorded at `theft_event`.
    ///
    /// Tokens are clawed back from the robber up to its current balance, so
    /// supply is conserved even if the robber has spent some of the proceeds.
    /// Returns the number of tokens restored to the victim.
    pub fn governance_rewrite(&mut self, theft_event: u64) -> Result<u64, LedgerError> {
        self.ensure_live()?;
        let snapshot = *self
            .thefts
            .get(&theft_event)
            .ok_or(LedgerError::EventNotFound(theft_event))?;
        if snapshot.rewritten_by.is_some() {
            return Err(LedgerError::AlreadyRewritten(theft_event));
        }
        let restored = snapshot.amount.min(self.balance(snapshot.robber)?);
        self.move_tokens(snapshot.robber, snapshot.victim, restored);
        let seq = self.push(EventKind::Rewrite, Some(snapshot.robber), Some(snapshot.victim), restored);
        if let Some(t) = self.thefts.get_mut(&theft_event) {
            t.rewritten_by = Some(seq);
        }
        Ok(restored)
    }

    /// Freezes the ledger. Idempotent; only the first call logs an event.
    pub fn collapse(&mut self) {
        if !self.collapsed {
            self.collapsed = true;
            self.push(EventKind::Collapse, None, None, 0);
        }
    }

    /// Every balance on the ledger. The observer is irrelevant: account
    /// ledgers hide nothing from anyone.
    pub fn visible_balances(&self, _observer: AccountId) -> BTreeMap<AccountId, u64> {
        self.accounts.iter().map(|(id, a)| (*id, a.balance)).collect()
    }

    /// Accounts with a positive balance.
    pub fn holders(&self) -> BTreeSet<AccountId> {
        self.accounts
            .values()
            .filter(|a| a.balance > 0)
            .map(|a| a.id)
            .collect()
    }

    /// Writes the event log as JSON lines.
    pub fn export_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for event in &self.history {
            serde_json::to_writer(&mut out, event)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    fn ensure_live(&self) -> Result<(), LedgerError> {
        if self.collapsed {
            Err(LedgerError::LedgerCollapsed)
        } else {
            Ok(())
        }
    }

    // Callers have already checked that both accounts exist and `from` is funded.
    fn move_tokens(&mut self, from: AccountId, to: AccountId, amount: u64) {
        if let Some(a) = self.accounts.get_mut(&from) {
            a.balance -= amount;
        }
        if let Some(a) = self.accounts.get_mut(&to) {
            a.balance += amount;
        }
    }

    fn push(&mut self, kind: EventKind, from: Option<AccountId>, to: Option<AccountId>, amount: u64) -> u64 {
        let seq = self.history.len() as u64;
        self.history.push(Event {
            seq,
            kind,
            from,
            to,
            amount,
            cycle: self.cycle,
        });
        seq
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    const A: AccountId = AccountId(1);
    const B: AccountId = AccountId(2);
    const C: AccountId = AccountId(3);

    fn ledger() -> LedgerState {
        LedgerState::genesis([(A, 10, false), (B, 0, false), (C, 5, true)]).unwrap()
    }

    #[test]
    fn transfer_moves_balance() {
        let mut l = ledger();
        l.transfer(A, B, 4).unwrap();
        assert_eq!(l.balance(A).unwrap(), 6);
        assert_eq!(l.balance(B).unwrap(), 4);
        assert_eq!(l.total_supply(), 15);
        assert_eq!(l.sum_balances(), 15);
    }

    #[test]
    fn zero_transfer_logs_one_event() {
        let mut l = ledger();
        let before = l.visible_balances(A);
        let n = l.history().len();
        l.transfer(A, B, 0).unwrap();
        assert_eq!(l.visible_balances(A), before);
        assert_eq!(l.history().len(), n + 1);
    }

    #[test]
    fn transfer_guards() {
        let mut l = ledger();
        let before = l.visible_balances(A);
        assert!(matches!(l.transfer(A, B, 11), Err(LedgerError::InsufficientBalance { .. })));
        assert_eq!(l.transfer(AccountId(9), B, 1), Err(LedgerError::UnknownAccount(AccountId(9))));
        assert_eq!(l.transfer(A, AccountId(9), 1), Err(LedgerError::UnknownAccount(AccountId(9))));
        assert_eq!(l.visible_balances(A), before);
    }

    #[test]
    fn steal_certain_and_impossible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut l = ledger();
        let out = l.steal(B, A, 3, 1.0, &mut rng).unwrap();
        assert!(out.success);
        assert_eq!(l.balance(B).unwrap(), 3);
        assert_eq!(l.history()[out.event as usize].kind, EventKind::Theft);

        for _ in 0..100 {
            assert!(!l.steal(B, A, 1, 0.0, &mut rng).unwrap().success);
        }
        // Victim too poor: fails whatever the draw.
        let out = l.steal(A, B, 4, 1.0, &mut rng).unwrap();
        assert!(!out.success);
        assert_eq!(l.history()[out.event as usize].kind, EventKind::Attempt);
        assert_eq!(l.sum_balances(), l.total_supply());
    }

    #[test]
    fn rewrite_restores_snapshot() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut l = ledger();
        let before = l.visible_balances(A);
        let out = l.steal(B, C, 5, 1.0, &mut rng).unwrap();
        assert_eq!(l.outstanding_stolen(), 5);
        assert_eq!(l.governance_rewrite(out.event).unwrap(), 5);
        assert_eq!(l.visible_balances(A), before);
        assert_eq!(l.outstanding_stolen(), 0);
        assert_eq!(l.history().last().unwrap().kind, EventKind::Rewrite);
        // Theft is still in the record.
        assert_eq!(l.history()[out.event as usize].kind, EventKind::Theft);
        assert_eq!(l.governance_rewrite(out.event), Err(LedgerError::AlreadyRewritten(out.event)));
    }

    #[test]
    fn rewrite_unknown_event() {
        let mut l = ledger();
        assert_eq!(l.governance_rewrite(0), Err(LedgerError::EventNotFound(0)));
        assert_eq!(l.governance_rewrite(99), Err(LedgerError::EventNotFound(99)));
    }

    #[test]
    fn dao_scale_rewrite_leaves_robber_nothing() {
        let robber = AccountId(100);
        let dao = AccountId(200);
        let mut l = LedgerState::genesis([(robber, 0, false), (dao, 11_500_000, true)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let theft = l.steal(robber, dao, 3_600_000, 1.0, &mut rng).unwrap();
        l.governance_rewrite(theft.event).unwrap();
        assert_eq!(l.balance(robber).unwrap(), 0);
        assert_eq!(l.balance(dao).unwrap(), 11_500_000);
    }

    #[test]
    fn rewrite_after_robber_spent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut l = ledger();
        let theft = l.steal(B, A, 6, 1.0, &mut rng).unwrap();
        l.transfer(B, C, 4).unwrap();
        assert_eq!(l.governance_rewrite(theft.event).unwrap(), 2);
        assert_eq!(l.sum_balances(), l.total_supply());
    }

    #[test]
    fn collapse_is_absorbing() {
        let mut l = ledger();
        l.collapse();
        let events = l.history().len();
        l.collapse();
        assert_eq!(l.history().len(), events);
        assert!(l.is_collapsed());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(l.transfer(A, B, 1), Err(LedgerError::LedgerCollapsed));
        assert_eq!(l.steal(B, A, 1, 1.0, &mut rng), Err(LedgerError::LedgerCollapsed));
        assert_eq!(l.governance_rewrite(0), Err(LedgerError::LedgerCollapsed));
        assert_eq!(l.sum_balances(), l.total_supply());
    }

    #[test]
    fn balances_visible_to_all() {
        let mut l = ledger();
        l.transfer(A, B, 2).unwrap();
        let view = l.visible_balances(A);
        for obs in [B, C, AccountId(42)] {
            assert_eq!(l.visible_balances(obs), view);
        }
        assert_eq!(view[&B], 2);
        assert_eq!(view.values().sum::<u64>(), l.total_supply());
    }

    #[test]
    fn jsonl_export() {
        let mut l = ledger();
        l.set_cycle(7);
        l.transfer(A, B, 1).unwrap();
        let mut buf = Vec::new();
        l.export_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let last = text.lines().last().unwrap();
        assert_eq!(last, r#"{"seq":3,"kind":"transfer","from":1,"to":2,"amount":1,"cycle":7}"#);
        assert_eq!(text.lines().count(), 4);
    }
}
