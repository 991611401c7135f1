use serde::Serialize;

/// Streaming mean and variance (Welford), mergeable across trials.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean)
    }

    /// Sample variance; needs two observations.
    pub fn variance(&self) -> Option<f64> {
        (self.count > 1).then(|| self.m2 / (self.count - 1) as f64)
    }

    pub fn stderr(&self) -> Option<f64> {
        self.variance().map(|v| (v / self.count as f64).sqrt())
    }
}

/// Aggregate outcome of `trials` independent runs.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SimStats {
    pub trials: u64,
    pub cycles_run: u64,
    pub trades: u64,
    pub money_trades: u64,
    pub credit_trades: u64,
    pub money_holder_credit_trades: u64,
    pub theft_attempts: u64,
    pub theft_successes: u64,
    pub rewrites: u64,
    pub defections: u64,
    /// Trials whose ledger collapsed.
    pub collapses: u64,
    /// Earliest collapse cycle over all trials.
    pub collapse_cycle: Option<u64>,
    /// Mean realized robber payoff per attempt.
    pub mean_robber_payoff: Option<f64>,
    pub stderr_robber_payoff: Option<f64>,
    /// Fraction of trades settled with money.
    pub money_share: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheftEstimate {
    pub attempts: u64,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
}

impl From<&Moments> for TheftEstimate {
    fn from(m: &Moments) -> Self {
        TheftEstimate {
            attempts: m.count(),
            mean: m.mean(),
            stderr: m.stderr(),
        }
    }
}
