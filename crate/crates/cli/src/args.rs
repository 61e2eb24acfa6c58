use std::path::PathBuf;

use asaf_core::Protocol;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "asaf", version, about = "Asynchronous slotted amplify-and-forward relay simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the channel matrix, symbolic or for one fade draw.
    Matrix(MatrixArgs),
    /// Monte Carlo outage sweep written as CSV plus a manifest.
    Outage(OutageArgs),
    /// Closed-form DMT lower bound over a grid of multiplexing gains.
    Bound(BoundArgs),
    /// Render outage or bound CSVs as an SVG line chart.
    Plot(PlotArgs),
    /// Fit diversity slopes to an outage CSV.
    Dmt(DmtArgs),
}

/// Network and delay-profile flags shared by the simulation commands.
#[derive(Debug, Clone, Default, Args)]
pub struct NetArgs {
    #[arg(long, short = 'N')]
    pub relays: Option<usize>,
    #[arg(long, short = 'M')]
    pub slots: Option<usize>,
    #[arg(long = "slot-len", short = 'T')]
    pub slot_len: Option<usize>,
    /// Guard interval in channel uses (defaults to theta for guard protocols).
    #[arg(long, short = 'x')]
    pub guard: Option<usize>,
    #[arg(long)]
    pub direct_link: bool,
    #[arg(long)]
    pub isolated: bool,
    #[arg(long)]
    pub protocol: Option<Protocol>,
    /// Source-to-relay delays, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Option<Vec<i64>>,
    /// Relay-to-destination delays, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pi: Option<Vec<i64>>,
    /// Slot offsets, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Option<Vec<i64>>,
    /// Direct-link delay.
    #[arg(long, allow_hyphen_values = true)]
    pub tau0: Option<i64>,
    /// Expected maximum delay; checked against the profile.
    #[arg(long)]
    pub theta: Option<i64>,
    /// JSON experiment spec; explicit flags override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Substitute one fade draw and print complex entries.
    #[arg(long)]
    pub numeric: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    /// Apply the collision drop plan (naive propagation-delay protocol only).
    #[arg(long)]
    pub drop: bool,
    /// Write `matrix.txt` into this directory instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutageArgs {
    #[command(flatten)]
    pub net: NetArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// SNR grid in dB: `a:b:step` or a comma-separated list.
    #[arg(long = "rho-db", allow_hyphen_values = true)]
    pub rho_db: Option<String>,
    /// Multiplexing gains (or bits with `--rate-bits`): list or `a:b:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// Interpret `--r` as fixed rates in bits per channel use.
    #[arg(long)]
    pub rate_bits: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Multiplexing-gain grid: list or `a:b:step`.
    #[arg(long, default_value = "0:1:0.01", allow_hyphen_values = true)]
    pub r: String,
    /// Write `bound.csv` into this directory instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Outage or bound CSV files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, short = 'o')]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DmtArgs {
    pub input: PathBuf,
    /// Fit window in dB, `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
}
