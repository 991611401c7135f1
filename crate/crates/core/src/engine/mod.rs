//! Discrete-cycle agent-based simulator.
//!
//! Each cycle a random subset of agents participates, participants are paired
//! uniformly at random with coin-flip consumer/supplier roles, trades settle
//! under the mode's rules, and one participant acts as robber. Policies are
//! one-shot best responses driven by [`crate::analytic`]. Trials are
//! independent and seeded from `(seed, trial index)`.

pub mod config;
pub mod policy;
pub mod sim;
pub mod state;
pub mod stats;

pub use config::{CollapseRule, CycleConfig, Economy, Mode};
pub use policy::{
    consumer_policy, robber_policy, supplier_policy, ConsumerChoice, LedgerView, Observations, RobberTarget,
    SupplierAction,
};
pub use sim::{estimate_theft_benefit, run_simulation, run_trial, trial_rng, Trajectory};
pub use state::{run_cycle, AgentState, CycleRecord, SimState, TheftRecord};
pub use stats::{Moments, SimStats, TheftEstimate};
