use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::config::CycleConfig;
use crate::engine::state::{choose_target, resolve_theft, run_cycle, trade_phase, CycleRecord, SimState};
use crate::engine::stats::{Moments, SimStats, TheftEstimate};
use crate::error::SimError;

/// Random stream for trial `trial`: ChaCha8 keyed by `seed`, one stream per trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Full record of one trial.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<CycleRecord>,
    pub state: SimState,
}

/// Runs trial `trial` for up to `config.cycles` cycles, stopping early if the
/// ledger collapses.
pub fn run_trial(config: &CycleConfig, trial: u64) -> Result<Trajectory, SimError> {
    let mut rng = trial_rng(config.seed, trial);
    let mut state = SimState::new(config)?;
    let mut records = Vec::with_capacity(config.cycles as usize);
    for _ in 0..config.cycles {
        records.push(run_cycle(&mut state, config, &mut rng)?);
        if state.is_terminated() {
            break;
        }
    }
    Ok(Trajectory { records, state })
}

#[derive(Debug, Clone, Default)]
struct TrialSummary {
    cycles: u64,
    trades: u64,
    money_trades: u64,
    credit_trades: u64,
    money_holder_credit_trades: u64,
    attempts: u64,
    successes: u64,
    rewrites: u64,
    defections: u64,
    collapse_cycle: Option<u64>,
    payoffs: Moments,
}

fn summarize(config: &CycleConfig, trial: u64) -> Result<TrialSummary, SimError> {
    let mut rng = trial_rng(config.seed, trial);
    let mut state = SimState::new(config)?;
    let mut s = TrialSummary::default();
    for _ in 0..config.cycles {
        let r = run_cycle(&mut state, config, &mut rng)?;
        s.cycles += 1;
        s.trades += r.trades;
        s.money_trades += r.money_trades;
        s.credit_trades += r.credit_trades;
        s.money_holder_credit_trades += r.money_holder_credit_trades;
        s.defections += r.defections;
        if let Some(t) = r.theft {
            s.attempts += 1;
            s.successes += u64::from(t.success);
            s.rewrites += u64::from(t.fate == Some(crate::analytic::LedgerFate::Rewritten));
            s.payoffs.push(t.payoff);
        }
        if state.is_terminated() {
            break;
        }
    }
    s.collapse_cycle = state.collapse_cycle;
    Ok(s)
}

/// Runs `config.trials` independent trials in parallel and aggregates them
/// in trial order, so the result depends only on the config.
pub fn run_simulation(config: &CycleConfig) -> Result<SimStats, SimError> {
    config.validate()?;
    let summaries: Vec<TrialSummary> = (0..config.trials)
        .into_par_iter()
        .map(|k| summarize(config, k))
        .collect::<Result<_, _>>()?;

    let mut stats = SimStats {
        trials: config.trials,
        ..SimStats::default()
    };
    let mut payoffs = Moments::default();
    for s in &summaries {
        stats.cycles_run += s.cycles;
        stats.trades += s.trades;
        stats.money_trades += s.money_trades;
        stats.credit_trades += s.credit_trades;
        stats.money_holder_credit_trades += s.money_holder_credit_trades;
        stats.theft_attempts += s.attempts;
        stats.theft_successes += s.successes;
        stats.rewrites += s.rewrites;
        stats.defections += s.defections;
        if let Some(c) = s.collapse_cycle {
            stats.collapses += 1;
            stats.collapse_cycle = Some(stats.collapse_cycle.map_or(c, |m| m.min(c)));
        }
        payoffs.merge(&s.payoffs);
    }
    stats.mean_robber_payoff = payoffs.mean();
    stats.stderr_robber_payoff = payoffs.stderr();
    stats.money_share = if stats.trades > 0 {
        stats.money_trades as f64 / stats.trades as f64
    } else {
        0.0
    };
    Ok(stats)
}

/// Monte Carlo estimate of the robber's payoff per attempt.
///
/// Each of the `config.trials` trials starts from a fresh economy, trades for
/// one cycle, then makes one robber (uniform over all agents) attempt a theft
/// whether or not it is worthwhile. Trials where the mode offers no target
/// are skipped. Matches the closed-form expected benefit for the mode.
pub fn estimate_theft_benefit(config: &CycleConfig) -> Result<TheftEstimate, SimError> {
    config.validate()?;
    let draws: Vec<Option<f64>> = (0..config.trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(config.seed, k);
            let mut state = SimState::new(config)?;
            trade_phase(&mut state, config, &mut rng)?;
            let robber = rng.gen_range(0..config.params.n);
            match choose_target(&state, config, robber, false, &mut rng) {
                Some(target) => Ok(Some(resolve_theft(&mut state, config, robber, target, &mut rng)?.payoff)),
                None => Ok(None),
            }
        })
        .collect::<Result<_, SimError>>()?;
    let mut m = Moments::default();
    draws.into_iter().flatten().for_each(|x| m.push(x));
    Ok(TheftEstimate::from(&m))
}
