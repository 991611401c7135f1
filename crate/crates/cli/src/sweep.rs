//! Sweep grids and the fixed CSV layout shared by `simulate` and `sweep`.

use tokenlab::engine::SimStats;
use tokenlab::scenario::ScenarioFile;

use crate::error::CliError;

/// Fixed leading columns. Grid axes that are not among them are appended in
/// the order given on the command line.
pub const COLUMNS: [&str; 19] = [
    "mode",
    "alpha",
    "epsilon",
    "f",
    "u",
    "c",
    "s",
    "delta",
    "n",
    "theta",
    "p_r",
    "trades",
    "theft_attempts",
    "theft_successes",
    "defections",
    "collapse_cycle",
    "mean_robber_payoff",
    "stderr",
    "money_share",
];

/// Keys a grid axis may vary.
pub const VARIABLE: [&str; 13] = [
    "alpha",
    "epsilon",
    "f",
    "u",
    "c",
    "s",
    "delta",
    "n",
    "theta",
    "p_r",
    "participation",
    "u_e",
    "c_e",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<f64>,
}

/// Parses `param=lo:hi:steps` into `steps` evenly spaced values from `lo`
/// to `hi` inclusive.
pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let bad = || {
        CliError::Input(format!(
            "invalid --vary `{spec}`: expected param=lo:hi:steps"
        ))
    };
    let (key, range) = spec.split_once('=').ok_or_else(bad)?;
    let key = key.trim();
    if !VARIABLE.contains(&key) {
        return Err(CliError::Input(format!(
            "invalid --vary `{spec}`: unknown parameter `{key}` (expected one of {})",
            VARIABLE.join(", ")
        )));
    }
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, steps] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if steps == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    let values = if steps == 1 {
        vec![lo]
    } else {
        (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    Ok(Axis {
        key: key.to_string(),
        values,
    })
}

/// Cartesian product of the axes; the first axis varies slowest.
pub fn grid(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut point = prefix.clone();
                    point.push(v);
                    point
                })
            })
            .collect()
    })
}

/// Sets one grid coordinate on a scenario.
pub fn apply(scenario: &mut ScenarioFile, key: &str, value: f64) -> Result<(), CliError> {
    let p = &mut scenario.params;
    match key {
        "alpha" => p.alpha = value,
        "epsilon" => p.epsilon = value,
        "f" => p.f = value,
        "u" => p.u = value,
        "c" => p.c = value,
        "s" => p.s = value,
        "delta" => p.delta = value,
        "n" => {
            if !(value >= 0.0 && value <= f64::from(u32::MAX)) {
                return Err(CliError::Input(format!(
                    "invalid `n`: expected N ≥ 2 (got {value})"
                )));
            }
            p.n = value.round() as u32;
        }
        "theta" => scenario.collapse_rule.theta = value,
        "p_r" => scenario.collapse_rule.p_r = value,
        "participation" => scenario.economy.participation = value,
        "u_e" => {
            scenario.exo.u_e = Some(value);
            scenario.exo.price_per_token = None;
        }
        "c_e" => scenario.exo.c_e = value,
        other => return Err(CliError::Input(format!("unknown parameter `{other}`"))),
    }
    Ok(())
}

/// Extra columns contributed by the axes, in axis order.
pub fn extra_columns(axes: &[Axis]) -> Vec<&str> {
    axes.iter()
        .map(|a| a.key.as_str())
        .filter(|k| !COLUMNS.contains(k))
        .collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV row in [`COLUMNS`] order.
pub fn row(scenario: &ScenarioFile, stats: &SimStats) -> Vec<String> {
    let p = &scenario.params;
    vec![
        scenario.mode.name().to_string(),
        p.alpha.to_string(),
        p.epsilon.to_string(),
        p.f.to_string(),
        p.u.to_string(),
        p.c.to_string(),
        p.s.to_string(),
        p.delta.to_string(),
        p.n.to_string(),
        scenario.collapse_rule.theta.to_string(),
        scenario.collapse_rule.p_r.to_string(),
        stats.trades.to_string(),
        stats.theft_attempts.to_string(),
        stats.theft_successes.to_string(),
        stats.defections.to_string(),
        opt(stats.collapse_cycle),
        opt(stats.mean_robber_payoff),
        opt(stats.stderr_robber_payoff),
        stats.money_share.to_string(),
    ]
}
