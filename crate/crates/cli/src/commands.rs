use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use tokenlab::analytic::{self, Condition, ExogenousParams, LedgerFate};
use tokenlab::engine::{run_simulation, run_trial, Mode, SimStats};
use tokenlab::ledger::mempool::{
    calibrate_frontrun, sandwich_attack, AttackResult, AttackStatus, PoolState, Side, SwapOrder,
};
use tokenlab::ledger::AccountId;
use tokenlab::scenario::{parse_scenario, ScenarioFile};
use tokenlab::taxonomy::{self, LedgerKind, Locus, Quadrant, TokenProfile, ValueBacking};

use crate::args::{
    ClassifyArgs, Command, EvalArgs, Format, MevArgs, RunOverrides, SimulateArgs, SweepArgs,
};
use crate::error::CliError;
use crate::report::{Provenance, Report, SEED_ENV};
use crate::sweep;

pub fn run(command: Command, echo: Vec<String>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Classify(a) => classify(a, stdout),
        Command::Eval(a) => eval(a, echo, stdout),
        Command::Simulate(a) => simulate(a, echo, stdout),
        Command::Sweep(a) => run_sweep(a, stdout),
        Command::Mev(a) => mev(a, echo, stdout),
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write output: {e}"))),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn pair(flag: &str, text: &str) -> Result<(f64, f64), CliError> {
    let bad = || {
        CliError::Input(format!(
            "invalid --{flag} `{text}`: expected two comma-separated numbers"
        ))
    };
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

#[derive(Serialize)]
struct Classification {
    quadrant: String,
    exemplar: &'static str,
    attack_effect: &'static str,
}

impl From<Quadrant> for Classification {
    fn from(q: Quadrant) -> Self {
        Classification {
            quadrant: q.position.to_string(),
            exemplar: q.exemplar,
            attack_effect: q.attack_effect,
        }
    }
}

fn classify(a: ClassifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let security = Locus::from(a.security);
    let trust = Locus::from(a.trust);
    let host = match a.host.map(LedgerKind::from) {
        Some(h) if h.trust_locus() != trust => {
            return Err(
                tokenlab::ValidationError::new("host", "host ledger must match --trust").into(),
            );
        }
        Some(h) => h,
        None => LedgerKind::for_trust(trust),
    };
    let mut out = to_value(&Classification::from(taxonomy::classify(security, trust)));
    let profile = TokenProfile::new(
        security,
        a.backing
            .map(ValueBacking::from)
            .unwrap_or(ValueBacking::ObjectBased),
        host,
    );
    if a.backing.is_some() {
        out["value_timing"] = to_value(&profile.value_timing);
    }
    if let Some(dest) = a.bridge_to {
        let moved = taxonomy::bridge(&profile, dest.into());
        out["bridged"] = to_value(&Classification::from(moved.quadrant()));
    }
    let mut text = serde_json::to_string_pretty(&out).expect("serializable");
    text.push('\n');
    emit(None, &text, stdout)
}

#[derive(Serialize)]
struct Entry {
    name: &'static str,
    inputs: Value,
    value: Value,
    /// Whether the relation holds; absent for plain values.
    #[serde(skip_serializing_if = "Option::is_none")]
    condition: Option<bool>,
    relation: String,
}

fn entry(
    name: &'static str,
    inputs: Value,
    value: impl Serialize,
    condition: Option<bool>,
    relation: impl Into<String>,
) -> Entry {
    Entry {
        name,
        inputs,
        value: to_value(&value),
        condition,
        relation: relation.into(),
    }
}

fn eval(a: EvalArgs, echo: Vec<String>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut scenario = parse_scenario(&a.params)?;
    if let Some(fate) = a.upsilon_fate {
        scenario.fate = Some(fate.into());
    }
    if let Some(text) = &a.exo {
        let (u_e, c_e) = pair("exo", text)?;
        scenario.exo.u_e = Some(u_e);
        scenario.exo.price_per_token = None;
        scenario.exo.c_e = c_e;
    }
    let fate = *scenario.fate.get_or_insert(LedgerFate::Survives);
    scenario.validate()?;
    let exo = scenario.exogenous();
    exo.validate()?;
    let results = evaluate(&scenario, fate, &exo);
    let report = Report {
        command: echo,
        config: to_value(&scenario),
        results: json!({ "entries": results }),
        provenance: Provenance::new(None),
    };
    emit(a.out.as_deref(), &report.to_json(), stdout)
}

fn evaluate(scenario: &ScenarioFile, fate: LedgerFate, exo: &ExogenousParams) -> Vec<Entry> {
    let p = scenario.params;
    let t = scenario.economy.theft_size;
    let upsilon = analytic::resolve_upsilon(p.u, fate);
    let mu = analytic::resolve_mu(t, p.u, fate);
    let goods = json!({"alpha": p.alpha, "epsilon": p.epsilon, "f": p.f, "c": p.c, "n": p.n});
    let token = json!({"alpha": p.alpha, "upsilon": upsilon, "c": p.c, "n": p.n});
    let exo_inputs =
        json!({"alpha": p.alpha, "upsilon": upsilon, "u_e": exo.u_e, "c": p.c, "c_e": exo.c_e});
    let credit = analytic::credit_equilibrium_sustainable(&p, upsilon);
    let informed = analytic::crypto_theft_benefit(&p, upsilon);
    let money = analytic::money_theft_benefit(&p);
    let exo_benefit = analytic::exogenous_theft_benefit(&p, exo, upsilon);
    let outcome = analytic::scenario_outcome(fate, t, p.u, exo, &p);
    let mut entries = vec![
        entry(
            "resolve_upsilon",
            json!({"u": p.u, "fate": fate}),
            upsilon,
            None,
            "upsilon = u if the ledger survives, else 0",
        ),
        entry(
            "resolve_mu",
            json!({"t": t, "u": p.u, "fate": fate}),
            mu,
            None,
            "mu = t*u if the ledger survives, else 0",
        ),
        entry(
            "random_theft_deterred",
            goods.clone(),
            p.alpha * p.epsilon * p.f / p.others(),
            Some(analytic::random_theft_deterred(&p)),
            Condition::RandomTargetDeterrence.relation(),
        ),
        entry(
            "crypto_theft_condition",
            token.clone(),
            p.alpha * upsilon / p.others(),
            Some(analytic::crypto_theft_condition(&p, upsilon)),
            Condition::SingleUnitTheft.relation(),
        ),
        entry(
            "crypto_theft_benefit",
            token.clone(),
            informed,
            Some(informed > 0.0),
            Condition::InformedTheftBenefit.relation(),
        ),
        entry(
            "full_info_sustainable_goods",
            goods,
            p.alpha * p.epsilon * p.f - p.c,
            Some(analytic::full_info_sustainable_goods(&p)),
            Condition::GoodsTheftSustainable.relation(),
        ),
        entry(
            "full_info_sustainable_crypto",
            json!({"alpha": p.alpha, "u": p.u, "c": p.c}),
            p.alpha * p.u - p.c,
            Some(analytic::full_info_sustainable_crypto(&p)),
            Condition::TokenTheftSustainable.relation(),
        ),
        entry(
            "credit_equilibrium_sustainable",
            json!({"u": p.u, "f": p.f, "upsilon": upsilon, "alpha": p.alpha, "c": p.c, "s": p.s, "delta": p.delta, "n": p.n}),
            credit,
            Some(credit.all),
            [
                Condition::CreditTheftTempting,
                Condition::CreditSurplus,
                Condition::CreditDynamic,
            ]
            .map(Condition::relation)
            .join("; "),
        ),
        entry(
            "expected_value_of_exchange",
            json!({"u": p.u, "s": p.s, "alpha": p.alpha, "upsilon": upsilon, "c": p.c, "delta": p.delta, "n": p.n}),
            analytic::expected_value_of_exchange(&p, upsilon),
            None,
            Condition::ExchangeValue.relation(),
        ),
        entry(
            "money_theft_benefit",
            json!({"alpha": p.alpha, "u": p.u, "c": p.c}),
            money,
            Some(money > 0.0),
            Condition::MoneyTheftBenefit.relation(),
        ),
        entry(
            "exogenous_theft_benefit",
            exo_inputs.clone(),
            exo_benefit,
            Some(exo_benefit > 0.0),
            Condition::ExogenousTheftBenefit.relation(),
        ),
        entry(
            "exogenous_sustainable",
            exo_inputs,
            exo_benefit,
            Some(analytic::exogenous_sustainable(&p, exo, upsilon)),
            Condition::ExogenousSustainable.relation(),
        ),
        entry(
            "scenario_outcome",
            json!({"fate": fate, "t": t, "u": p.u, "u_e": exo.u_e, "c": p.c, "c_e": exo.c_e}),
            outcome,
            Some(outcome.net > 0.0),
            "net = mu + u_e - (c + c_e)",
        ),
    ];
    if let Some(profile) = &scenario.token_profile {
        let profile = profile.profile();
        entries.push(entry(
            "classify",
            json!({"security": profile.security_locus, "trust": profile.trust_locus}),
            Classification::from(profile.quadrant()),
            None,
            "quadrant = (security locus, trust locus)",
        ));
    }
    entries
}

/// Scenario with command-line overrides applied, and the resolved seed.
fn load(run: &RunOverrides) -> Result<(ScenarioFile, u64), CliError> {
    let mut scenario = parse_scenario(&run.config)?;
    if let Some(mode) = run.mode {
        scenario.mode = mode.into();
    }
    if let Some(cycles) = run.cycles {
        scenario.cycles = cycles;
    }
    if let Some(trials) = run.trials {
        scenario.trials = trials;
    }
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(text) => Some(text.trim().parse::<u64>().map_err(|_| {
            CliError::Input(format!(
                "invalid {SEED_ENV} `{text}`: expected an unsigned integer"
            ))
        })?),
        Err(_) => None,
    };
    let seed = run.seed.or(scenario.seed).or(env_seed).unwrap_or(0);
    scenario.seed = Some(seed);
    scenario.validate()?;
    Ok((scenario, seed))
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn simulate(a: SimulateArgs, echo: Vec<String>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (scenario, seed) = load(&a.run)?;
    let config = scenario.cycle_config(seed);
    if a.events.is_some() && config.mode != Mode::CryptoLedger {
        return Err(CliError::Input("--events needs mode CryptoLedger".into()));
    }
    let stats: SimStats = run_simulation(&config)?;
    if let Some(path) = &a.events {
        let trajectory = run_trial(&config, 0)?;
        let ledger = trajectory.state.ledger.expect("ledger mode");
        let mut buf = Vec::new();
        ledger
            .export_jsonl(&mut buf)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        fs::write(path, buf).map_err(|e| CliError::io(path, e))?;
    }
    let text = match a.format {
        Format::Json => Report {
            command: echo,
            config: to_value(&scenario),
            results: to_value(&stats),
            provenance: Provenance::new(Some(seed)),
        }
        .to_json(),
        Format::Csv => csv_text(&sweep::COLUMNS, &[sweep::row(&scenario, &stats)])?,
    };
    emit(a.out.as_deref(), &text, stdout)
}

fn run_sweep(a: SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (base, seed) = load(&a.run)?;
    let axes = a
        .vary
        .iter()
        .map(|s| sweep::parse_axis(s))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, axis) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.key == axis.key) {
            return Err(CliError::Input(format!(
                "--vary `{}` given twice",
                axis.key
            )));
        }
    }
    let points = sweep::grid(&axes);
    let scenarios = points
        .iter()
        .map(|point| {
            let mut s = base.clone();
            for (axis, &v) in axes.iter().zip(point) {
                sweep::apply(&mut s, &axis.key, v)?;
            }
            s.validate()?;
            Ok(s)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let stats = scenarios
        .par_iter()
        .map(|s| run_simulation(&s.cycle_config(seed)))
        .collect::<Result<Vec<_>, _>>()?;
    let extra = sweep::extra_columns(&axes);
    let header: Vec<&str> = sweep::COLUMNS
        .iter()
        .copied()
        .chain(extra.iter().copied())
        .collect();
    let rows: Vec<Vec<String>> = scenarios
        .iter()
        .zip(&stats)
        .zip(&points)
        .map(|((s, st), point)| {
            let mut r = sweep::row(s, st);
            for (axis, v) in axes.iter().zip(point) {
                if extra.contains(&axis.key.as_str()) {
                    r.push(v.to_string());
                }
            }
            r
        })
        .collect();
    emit(a.out.as_deref(), &csv_text(&header, &rows)?, stdout)
}

const ATTACKER: AccountId = AccountId(0);
const VICTIM: AccountId = AccountId(1);

#[derive(Serialize)]
struct SwapEvent {
    seq: u64,
    kind: &'static str,
    from: AccountId,
    to: Option<AccountId>,
    amount: f64,
    cycle: u64,
}

fn swap_events(
    pool: &PoolState,
    victim: &SwapOrder,
    frontrun: f64,
    result: &AttackResult,
) -> Result<Vec<SwapEvent>, CliError> {
    let bought = pool.quote(victim.side, frontrun)?;
    let ev = |seq, kind, from, amount| SwapEvent {
        seq,
        kind,
        from,
        to: None,
        amount,
        cycle: 0,
    };
    let victim_kind = match result.status {
        AttackStatus::Executed => "victim_swap",
        AttackStatus::VictimCancelled => "victim_cancelled",
    };
    Ok(vec![
        ev(1, "frontrun", ATTACKER, frontrun),
        ev(2, victim_kind, VICTIM, victim.amount_in),
        ev(3, "backrun", ATTACKER, bought),
    ])
}

fn mev(a: MevArgs, echo: Vec<String>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (x, y) = pair("pool", &a.pool)?;
    let (amount, min_out) = pair("victim", &a.victim)?;
    if !(a.gas >= 0.0 && a.bid >= 0.0 && a.gas.is_finite() && a.bid.is_finite()) {
        return Err(tokenlab::ValidationError::new("gas", "gas, bid ≥ 0").into());
    }
    let side = Side::XToY;
    let pool = PoolState::new(x, y)?;
    let victim = SwapOrder::new(VICTIM, side, amount, min_out)?;
    let frontrun = match (a.frontrun, a.target_out) {
        (Some(f), _) => f,
        (None, Some(target)) => calibrate_frontrun(&pool, side, amount, target)?,
        (None, None) => {
            return Err(CliError::Input(
                "one of --frontrun and --target-out is required".into(),
            ))
        }
    };
    let unattacked_out = pool.quote(side, amount)?;
    let result = sandwich_attack(&pool, &victim, frontrun, a.gas, a.bid)?;
    if let Some(path) = &a.events {
        let mut buf = Vec::new();
        for e in swap_events(&pool, &victim, frontrun, &result)? {
            serde_json::to_writer(&mut buf, &e).expect("serializable");
            buf.push(b'\n');
        }
        fs::write(path, buf).map_err(|e| CliError::io(path, e))?;
    }
    let mut results = to_value(&result);
    results["frontrun"] = json!(frontrun);
    results["unattacked_out"] = json!(unattacked_out);
    results["profitable"] = json!(analytic::mev_profitable(result.extraction, a.gas, a.bid));
    let report = Report {
        command: echo,
        config: json!({
            "pool": {"reserve_x": x, "reserve_y": y},
            "victim": {"amount_in": amount, "min_out": min_out, "side": side},
            "frontrun": a.frontrun,
            "target_out": a.target_out,
            "gas": a.gas,
            "bid": a.bid,
        }),
        results,
        provenance: Provenance::new(None),
    };
    emit(a.out.as_deref(), &report.to_json(), stdout)
}
