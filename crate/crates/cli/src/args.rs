use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tokenlab::analytic::LedgerFate;
use tokenlab::engine::Mode;
use tokenlab::taxonomy::{LedgerKind, Locus, ValueBacking};

/// Theft, credit and collapse experiments on token economies.
#[derive(Debug, Parser)]
#[command(name = "tokenlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Place a token in the security-locus × trust-locus matrix.
    Classify(ClassifyArgs),
    /// Evaluate every closed-form condition for a scenario.
    Eval(EvalArgs),
    /// Run the agent-based simulator.
    Simulate(SimulateArgs),
    /// Run the simulator over a parameter grid.
    Sweep(SweepArgs),
    /// Sandwich a pending swap in a constant-product pool.
    Mev(MevArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LocusArg {
    Endo,
    Exo,
}

impl From<LocusArg> for Locus {
    fn from(l: LocusArg) -> Locus {
        match l {
            LocusArg::Endo => Locus::Endogenous,
            LocusArg::Exo => Locus::Exogenous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackingArg {
    Object,
    Claim,
}

impl From<BackingArg> for ValueBacking {
    fn from(b: BackingArg) -> ValueBacking {
        match b {
            BackingArg::Object => ValueBacking::ObjectBased,
            BackingArg::Claim => ValueBacking::ClaimBased,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HostArg {
    Public,
    Private,
}

impl From<HostArg> for LedgerKind {
    fn from(h: HostArg) -> LedgerKind {
        match h {
            HostArg::Public => LedgerKind::PublicPermissionless,
            HostArg::Private => LedgerKind::PrivateOrConsortium,
        }
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_enum)]
    pub security: LocusArg,
    #[arg(long, value_enum)]
    pub trust: LocusArg,
    #[arg(long, value_enum)]
    pub backing: Option<BackingArg>,
    /// Host ledger; must agree with --trust.
    #[arg(long, value_enum)]
    pub host: Option<HostArg>,
    /// Also classify the token after moving it to this kind of ledger.
    #[arg(long, value_enum)]
    pub bridge_to: Option<HostArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FateArg {
    Survives,
    Collapses,
    Rewritten,
}

impl From<FateArg> for LedgerFate {
    fn from(f: FateArg) -> LedgerFate {
        match f {
            FateArg::Survives => LedgerFate::Survives,
            FateArg::Collapses => LedgerFate::Collapses,
            FateArg::Rewritten => LedgerFate::Rewritten,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Scenario file.
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    /// Ledger fate used to resolve υ and μ. Defaults to the file's, then survives.
    #[arg(long, value_enum)]
    pub upsilon_fate: Option<FateArg>,
    /// Exogenous gain and cost, as `u_e,c_e`.
    #[arg(long, value_name = "U_E,C_E")]
    pub exo: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "Bilateral22")]
    Bilateral22,
    #[value(name = "FullInfo23")]
    FullInfo23,
    #[value(name = "MoneySemianon31")]
    MoneySemianon31,
    #[value(name = "MoneyOrBilateral32")]
    MoneyOrBilateral32,
    #[value(name = "MoneyOrFullInfo33")]
    MoneyOrFullInfo33,
    #[value(name = "CryptoLedger")]
    CryptoLedger,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Bilateral22 => Mode::Bilateral22,
            ModeArg::FullInfo23 => Mode::FullInfo23,
            ModeArg::MoneySemianon31 => Mode::MoneySemianon31,
            ModeArg::MoneyOrBilateral32 => Mode::MoneyOrBilateral32,
            ModeArg::MoneyOrFullInfo33 => Mode::MoneyOrFullInfo33,
            ModeArg::CryptoLedger => Mode::CryptoLedger,
        }
    }
}

/// Flags that override the scenario file.
#[derive(Debug, Args)]
pub struct RunOverrides {
    /// Scenario file.
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    /// Master seed. Falls back to the file's seed, then TOKENLAB_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub cycles: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunOverrides,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write trial 0's ledger event log as JSON lines (ledger mode only).
    #[arg(long, value_name = "PATH")]
    pub events: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunOverrides,
    /// Grid axis as `param=lo:hi:steps`; repeat for a product grid.
    #[arg(long, value_name = "PARAM=LO:HI:STEPS", required = true)]
    pub vary: Vec<String>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MevArgs {
    /// Reserves of the input and output asset, as `X,Y`.
    #[arg(long, value_name = "X,Y")]
    pub pool: String,
    /// Victim's swap, as `amount,min_out`.
    #[arg(long, value_name = "AMOUNT,MIN_OUT")]
    pub victim: String,
    #[arg(
        long,
        value_name = "A",
        conflicts_with = "target_out",
        required_unless_present = "target_out"
    )]
    pub frontrun: Option<f64>,
    /// Solve for the front-run that leaves the victim exactly this output.
    #[arg(long, value_name = "OUT")]
    pub target_out: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub gas: f64,
    #[arg(long, default_value_t = 0.0)]
    pub bid: f64,
    /// Write the attack as a JSON-lines event log.
    #[arg(long, value_name = "PATH")]
    pub events: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}
