//! Command-line front end over the `mudgain` library: closed-form lookups,
//! one-off simulations, power searches, and the standard CSV tables.
//!
//! The binary's contract, in three sentences. Usage mistakes (bad flags,
//! bad values, unknown selectors) exit with status 2; runtime failures
//! (I/O, unreachable search targets) exit with 1; success is 0 and silent
//! except for the requested output. Every file output gets a `.manifest`
//! sidecar from which the run can be replayed byte-for-byte. Nothing is
//! read from the environment — parallelism is set by `--threads`, and
//! results never depend on it.

pub mod args;
pub mod manifest;
pub mod tables;

use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};

use mudgain::analytics::{
    mud_gain_upper_bound, noma_outage_lower_bound, noma_power_lower_bound, oma_outage,
    oma_required_power,
};
use mudgain::linear_to_db;
use mudgain::montecarlo::TrialPlan;

use args::{AnalyticArgs, Cli, Command, FigureArgs, SearchArgs, SimulateArgs};
use manifest::RunManifest;
use tables::{fmt_db, fmt_prob};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failures of a run, split by who gets the blame. The split is the exit
/// code contract: usage errors exit 2 (like flag-parse failures), runtime
/// errors exit 1.
#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<mudgain::Error> for RunError {
    fn from(err: mudgain::Error) -> Self {
        match err {
            // Domain violations here can only come from flag values.
            mudgain::Error::Domain(msg) => RunError::Usage(msg),
            other => RunError::Runtime(anyhow::Error::new(other)),
        }
    }
}

impl From<anyhow::Error> for RunError {
    fn from(err: anyhow::Error) -> Self {
        RunError::Runtime(err)
    }
}

/// Executes a parsed command line end to end.
pub fn run(cli: Cli) -> Result<(), RunError> {
    match cli.threads {
        None => dispatch(cli.command),
        Some(0) => Err(RunError::Usage("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| anyhow!("building a {n}-worker pool: {e}"))?;
            pool.install(|| dispatch(cli.command))
        }
    }
}

fn dispatch(command: Command) -> Result<(), RunError> {
    match command {
        Command::Analytic(args) => run_analytic(args),
        Command::Simulate(args) => run_simulate(args),
        Command::PowerSearch(args) => run_search(args, false),
        Command::Gain(args) => run_search(args, true),
        Command::Figure(args) => run_figure(args),
    }
}

/// Writes `text` to `--out` with a manifest sidecar, or to stdout when no
/// output path was asked for.
fn deliver(text: &str, out: Option<&Path>, manifest: &RunManifest) -> Result<(), RunError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?;
            let mut sidecar = path.as_os_str().to_os_string();
            sidecar.push(".manifest");
            fs::write(&sidecar, manifest.render())
                .with_context(|| format!("writing {}", Path::new(&sidecar).display()))?;
            Ok(())
        }
    }
}

fn out_string(out: &Option<std::path::PathBuf>) -> Option<String> {
    out.as_ref().map(|p| p.display().to_string())
}

// ---------------------------------------------------------------------------
// analytic
// ---------------------------------------------------------------------------

fn run_analytic(args: AnalyticArgs) -> Result<(), RunError> {
    let what = args.what.as_str();
    let takes_epsilon = matches!(what, "oma-power" | "noma-bound-power" | "gain-bound");
    let takes_power = matches!(what, "oma-outage" | "noma-bound-outage");
    if !takes_epsilon && !takes_power {
        return Err(RunError::Usage(format!(
            "unknown --what selector `{what}` (expected oma-outage, oma-power, \
             noma-bound-outage, noma-bound-power, or gain-bound)"
        )));
    }
    if takes_epsilon && args.power_db.is_some() {
        return Err(RunError::Usage(format!(
            "`{what}` is a function of --epsilon, not --power-db"
        )));
    }
    if takes_power && args.epsilon.is_some() {
        return Err(RunError::Usage(format!(
            "`{what}` is a function of --power-db, not --epsilon"
        )));
    }
    if takes_power && args.power_db.is_none() {
        return Err(RunError::Usage(format!("`{what}` needs --power-db")));
    }

    let mut text = String::new();
    if takes_epsilon {
        let epsilon = args.epsilon.unwrap_or(0.01);
        for &eta_s in &args.eta_s {
            let line = match what {
                "oma-power" => {
                    let p = oma_required_power(eta_s, epsilon)?;
                    format!(
                        "oma-power(eta_s={eta_s}, epsilon={epsilon}): {:.6} linear, {} dB\n",
                        p,
                        fmt_db(linear_to_db(p)),
                    )
                }
                "noma-bound-power" => {
                    let p = noma_power_lower_bound(eta_s, epsilon)?;
                    format!(
                        "noma-bound-power(eta_s={eta_s}, epsilon={epsilon}): {:.6} linear, {} dB\n",
                        p,
                        fmt_db(linear_to_db(p)),
                    )
                }
                _ => format!(
                    "gain-bound(eta_s={eta_s}, epsilon={epsilon}): {} dB\n",
                    fmt_db(mud_gain_upper_bound(eta_s, epsilon)?),
                ),
            };
            text.push_str(&line);
        }
    } else {
        for &eta_s in &args.eta_s {
            for &p_db in args.power_db.as_deref().unwrap() {
                let p = mudgain::db_to_linear(p_db);
                let eps = match what {
                    "oma-outage" => oma_outage(eta_s, p)?,
                    _ => noma_outage_lower_bound(eta_s, p)?,
                };
                text.push_str(&format!(
                    "{what}(eta_s={eta_s}, power_db={p_db}): {}\n",
                    fmt_prob(eps),
                ));
            }
        }
    }

    let manifest = RunManifest {
        command: "analytic".into(),
        what: Some(args.what.clone()),
        eta_s: args.eta_s.clone(),
        epsilon: if takes_epsilon {
            Some(args.epsilon.unwrap_or(0.01))
        } else {
            None
        },
        power_db: args.power_db.clone(),
        out: out_string(&args.out),
        version: VERSION.into(),
        ..RunManifest::default()
    };
    deliver(&text, args.out.as_deref(), &manifest)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn run_simulate(args: SimulateArgs) -> Result<(), RunError> {
    let plan = TrialPlan::new(args.seed, args.trials)?;
    let text = tables::simulate_table_csv(&args.eta_s, &args.power_db, &args.j, &plan)?;
    let manifest = RunManifest {
        command: "simulate".into(),
        eta_s: args.eta_s.clone(),
        power_db: Some(args.power_db.clone()),
        j: Some(args.j.clone()),
        trials: Some(args.trials),
        seed: Some(args.seed),
        out: out_string(&args.out),
        version: VERSION.into(),
        ..RunManifest::default()
    };
    deliver(&text, args.out.as_deref(), &manifest)
}

// ---------------------------------------------------------------------------
// power-search and gain
// ---------------------------------------------------------------------------

fn run_search(args: SearchArgs, as_gain: bool) -> Result<(), RunError> {
    let plan = TrialPlan::new(args.seed, args.trials)?;
    let text = if as_gain {
        tables::gain_table_csv(&args.eta_s, args.epsilon, &args.j, &plan, args.tol_db)?
    } else {
        tables::power_search_table_csv(&args.eta_s, args.epsilon, &args.j, &plan, args.tol_db)?
    };
    let manifest = RunManifest {
        command: if as_gain { "gain" } else { "power-search" }.into(),
        eta_s: args.eta_s.clone(),
        epsilon: Some(args.epsilon),
        j: Some(args.j.clone()),
        trials: Some(args.trials),
        seed: Some(args.seed),
        tol_db: Some(args.tol_db),
        out: out_string(&args.out),
        version: VERSION.into(),
        ..RunManifest::default()
    };
    deliver(&text, args.out.as_deref(), &manifest)
}

// ---------------------------------------------------------------------------
// figure
// ---------------------------------------------------------------------------

/// The four standard tables and their default parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FigId {
    /// Outage vs power, simulated curves with the single-user closed form.
    Fig2,
    /// Gain vs superposition factor.
    Fig3,
    /// Outage vs power with infinite-user bound rows.
    Fig4,
    /// Gain vs sum spectral efficiency with the bound and its realized
    /// fraction.
    Fig5,
}

impl FigId {
    fn parse(text: &str) -> Result<Self, RunError> {
        match text {
            "fig2" => Ok(FigId::Fig2),
            "fig3" => Ok(FigId::Fig3),
            "fig4" => Ok(FigId::Fig4),
            "fig5" => Ok(FigId::Fig5),
            other => Err(RunError::Usage(format!(
                "unknown figure `{other}` (expected fig2, fig3, fig4, or fig5)"
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            FigId::Fig2 => "fig2",
            FigId::Fig3 => "fig3",
            FigId::Fig4 => "fig4",
            FigId::Fig5 => "fig5",
        }
    }

    fn default_eta_s(self) -> Vec<f64> {
        match self {
            FigId::Fig5 => (1..=9).map(f64::from).collect(),
            _ => vec![3.0, 6.0],
        }
    }

    fn default_j(self) -> Vec<usize> {
        match self {
            FigId::Fig2 | FigId::Fig4 => vec![1, 2, 4, 10, 50, 100],
            FigId::Fig3 => (1..=100).collect(),
            FigId::Fig5 => vec![2, 4, 10, 100],
        }
    }

    fn is_gain_figure(self) -> bool {
        matches!(self, FigId::Fig3 | FigId::Fig5)
    }
}

fn run_figure(args: FigureArgs) -> Result<(), RunError> {
    let fig = FigId::parse(&args.fig_id)?;
    if fig.is_gain_figure() {
        if args.power_db.is_some() {
            return Err(RunError::Usage(format!(
                "{} finds its powers by search; --power-db does not apply",
                fig.name()
            )));
        }
    } else {
        if args.epsilon.is_some() {
            return Err(RunError::Usage(format!(
                "{} sweeps power directly; --epsilon does not apply",
                fig.name()
            )));
        }
        if args.tol_db.is_some() {
            return Err(RunError::Usage(format!(
                "{} runs no power search; --tol-db does not apply",
                fig.name()
            )));
        }
    }

    let eta_s = args.eta_s.clone().unwrap_or_else(|| fig.default_eta_s());
    let j = args.j.clone().unwrap_or_else(|| fig.default_j());
    let plan = TrialPlan::new(args.seed, args.trials)?;

    let (text, epsilon, tol_db) = match fig {
        FigId::Fig2 | FigId::Fig4 => {
            let csv = tables::outage_table_csv(
                &eta_s,
                args.power_db.as_deref(),
                &j,
                &plan,
                fig == FigId::Fig4,
            )?;
            (csv, None, None)
        }
        FigId::Fig3 | FigId::Fig5 => {
            let epsilon = args.epsilon.unwrap_or(0.01);
            let tol_db = args.tol_db.unwrap_or(0.01);
            let csv = if fig == FigId::Fig3 {
                tables::gain_table_csv(&eta_s, epsilon, &j, &plan, tol_db)?
            } else {
                tables::gain_vs_eta_csv(&eta_s, epsilon, &j, &plan, tol_db)?
            };
            (csv, Some(epsilon), Some(tol_db))
        }
    };

    let manifest = RunManifest {
        command: "figure".into(),
        what: Some(fig.name().into()),
        eta_s,
        epsilon,
        // A defaulted power grid is a function of eta_s and stays implicit;
        // an explicit override is part of the run and gets recorded.
        power_db: args.power_db.clone(),
        j: Some(j),
        trials: Some(args.trials),
        seed: Some(args.seed),
        tol_db,
        out: Some(args.out.display().to_string()),
        version: VERSION.into(),
    };
    deliver(&text, Some(&args.out), &manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig_defaults_match_the_standard_parameter_sets() {
        assert_eq!(FigId::Fig2.default_eta_s(), vec![3.0, 6.0]);
        assert_eq!(FigId::Fig2.default_j(), vec![1, 2, 4, 10, 50, 100]);
        assert_eq!(FigId::Fig3.default_j().len(), 100);
        assert_eq!(FigId::Fig5.default_eta_s().len(), 9);
        assert_eq!(FigId::Fig5.default_j(), vec![2, 4, 10, 100]);
        assert!(FigId::parse("fig6").is_err());
    }

    #[test]
    fn domain_errors_map_to_usage() {
        let err = RunError::from(mudgain::Error::Domain("bad".into()));
        assert!(matches!(err, RunError::Usage(_)));
        let err = RunError::from(mudgain::Error::BracketFailure {
            lo_db: 0.0,
            hi_db: 1.0,
            target: 0.01,
            detail: "x".into(),
        });
        assert!(matches!(err, RunError::Runtime(_)));
    }
}
