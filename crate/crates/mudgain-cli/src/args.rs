//! Flag surface of the `mudgain` binary.
//!
//! Every list-valued flag takes comma-separated values (`--j 1,2,4`), and
//! every default here is also what a figure run records in its manifest, so
//! a manifest can always be replayed with explicit flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "mudgain",
    version,
    about = "Outage and multiuser-diversity analysis for superposed transmission on block-fading uplinks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Size of the worker pool (default: one worker per CPU). Results are
    /// bit-identical for every setting.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one of the closed forms
    Analytic(AnalyticArgs),
    /// Estimate individual outage at fixed power by Monte Carlo
    Simulate(SimulateArgs),
    /// Find the power needed to reach an outage target
    PowerSearch(SearchArgs),
    /// Simulated multiuser-diversity gain across superposition factors
    Gain(SearchArgs),
    /// Reproduce one of the standard result tables as CSV
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// Quantity to evaluate: oma-outage | oma-power | noma-bound-outage |
    /// noma-bound-power | gain-bound
    #[arg(long)]
    pub what: String,

    /// Sum spectral efficiency target(s), bit/s/Hz
    #[arg(long = "eta-s", value_delimiter = ',', required = true)]
    pub eta_s: Vec<f64>,

    /// Individual outage target for the power and gain forms (default 0.01)
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Normalized sum power(s) in dB for the outage forms
    #[arg(long = "power-db", value_delimiter = ',', allow_hyphen_values = true)]
    pub power_db: Option<Vec<f64>>,

    /// Write the table to this file instead of stdout (adds a `.manifest`
    /// sidecar)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Sum spectral efficiency target(s), bit/s/Hz
    #[arg(long = "eta-s", value_delimiter = ',', required = true)]
    pub eta_s: Vec<f64>,

    /// Normalized sum power(s), dB
    #[arg(
        long = "power-db",
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub power_db: Vec<f64>,

    /// Superposition factor(s): how many users share each block
    #[arg(long, value_delimiter = ',', required = true)]
    pub j: Vec<usize>,

    /// Channel-block draws per estimate
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    /// Seed of the deterministic draw stream
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write the table to this file instead of stdout (adds a `.manifest`
    /// sidecar)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Shared flags of `power-search` and `gain`: both bisect for required
/// power, `gain` just reports it relative to the orthogonal reference.
#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Sum spectral efficiency target(s), bit/s/Hz
    #[arg(long = "eta-s", value_delimiter = ',', required = true)]
    pub eta_s: Vec<f64>,

    /// Individual outage target
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,

    /// Superposition factor(s): how many users share each block
    #[arg(long, value_delimiter = ',', required = true)]
    pub j: Vec<usize>,

    /// Channel-block draws per outage estimate
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    /// Seed of the deterministic draw stream
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Bisection stops when the power window is this narrow, dB
    #[arg(long = "tol-db", default_value_t = 0.01)]
    pub tol_db: f64,

    /// Write the table to this file instead of stdout (adds a `.manifest`
    /// sidecar)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Which table to produce: fig2 | fig3 | fig4 | fig5
    pub fig_id: String,

    /// Sum spectral efficiency value(s); default depends on the figure
    #[arg(long = "eta-s", value_delimiter = ',')]
    pub eta_s: Option<Vec<f64>>,

    /// Individual outage target for the gain figures (default 0.01)
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Power grid in dB for the outage figures (default derived from the
    /// closed forms)
    #[arg(long = "power-db", value_delimiter = ',', allow_hyphen_values = true)]
    pub power_db: Option<Vec<f64>>,

    /// Superposition factors; default depends on the figure
    #[arg(long, value_delimiter = ',')]
    pub j: Option<Vec<usize>>,

    /// Channel-block draws per outage estimate
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    /// Seed of the deterministic draw stream
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Bisection window for the gain figures, dB (default 0.01)
    #[arg(long = "tol-db")]
    pub tol_db: Option<f64>,

    /// Output CSV path (a `.manifest` sidecar lands next to it)
    #[arg(long)]
    pub out: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[test]
    fn comma_lists_split() {
        let cli = Cli::parse_from([
            "mudgain", "simulate", "--eta-s", "3,6", "--power-db", "-2,10.5", "--j", "1,2,4",
        ]);
        match cli.command {
            Command::Simulate(a) => {
                assert_eq!(a.eta_s, vec![3.0, 6.0]);
                assert_eq!(a.power_db, vec![-2.0, 10.5]);
                assert_eq!(a.j, vec![1, 2, 4]);
                assert_eq!(a.trials, 1_000_000);
                assert_eq!(a.seed, 0);
            }
            other => panic!("wrong command: {other:?}"),
        }
    }

    #[test]
    fn search_defaults() {
        let cli = Cli::parse_from(["mudgain", "power-search", "--eta-s", "3", "--j", "4"]);
        match cli.command {
            Command::PowerSearch(a) => {
                assert_eq!(a.epsilon, 0.01);
                assert_eq!(a.tol_db, 0.01);
            }
            other => panic!("wrong command: {other:?}"),
        }
    }

    #[test]
    fn threads_is_global() {
        let cli = Cli::parse_from([
            "mudgain", "figure", "fig3", "--out", "x.csv", "--threads", "2",
        ]);
        assert_eq!(cli.threads, Some(2));
    }

    #[test]
    fn missing_required_flags_fail_to_parse() {
        assert!(Cli::try_parse_from(["mudgain", "simulate", "--eta-s", "3"]).is_err());
        assert!(Cli::try_parse_from(["mudgain", "figure", "fig2"]).is_err());
        assert!(Cli::try_parse_from(["mudgain", "nonsense"]).is_err());
    }
}
