//! CSV table builders behind the `simulate`, `power-search`, `gain`, and
//! `figure` commands.
//!
//! Formatting is pinned: probabilities print with six decimal places
//! (below Monte-Carlo noise, above float noise), dB values with four, and
//! configuration echoes (`eta_s`, `j`) through plain `Display` so they read
//! back as typed. Lines end in LF. Golden tests hold the schemas still.

use mudgain::analytics::{
    mud_gain_upper_bound, noma_outage_lower_bound, noma_power_lower_bound, oma_outage,
    oma_required_power,
};
use mudgain::model::ScenarioConfig;
use mudgain::montecarlo::{
    estimate_individual_outage, mud_gain_samples, required_power, TrialPlan,
};
use mudgain::{db_to_linear, linear_to_db};

use crate::RunError;

pub fn fmt_prob(x: f64) -> String {
    format!("{x:.6}")
}

pub fn fmt_db(x: f64) -> String {
    format!("{x:.4}")
}

/// Default power grid of the outage tables for one spectral-efficiency
/// value: 2 dB steps across the range where outage is interesting, from the
/// power at which even the infinite-user bound only reaches one half, up to
/// the power at which a single user is already down to half a percent.
pub fn default_power_grid_db(eta_s: f64) -> mudgain::Result<Vec<f64>> {
    let lo = linear_to_db(noma_power_lower_bound(eta_s, 0.5)?).floor();
    let hi = linear_to_db(oma_required_power(eta_s, 0.005)?).ceil();
    let mut grid = Vec::new();
    let mut p = lo;
    while p <= hi + 1e-9 {
        grid.push(p);
        p += 2.0;
    }
    Ok(grid)
}

fn check_j_list(j_list: &[usize]) -> Result<(), RunError> {
    if j_list.is_empty() {
        return Err(RunError::Usage("--j needs at least one value".into()));
    }
    Ok(())
}

/// Individual outage versus power: the shared body of the two outage
/// figures. Every simulated row carries its Wilson halfwidth; single-user
/// rows also carry the closed form in the last column. With
/// `include_bound_rows`, each power closes with an infinite-user bound row
/// (`j` recorded as `inf`, estimate columns empty).
pub fn outage_table_csv(
    eta_list: &[f64],
    power_override: Option<&[f64]>,
    j_list: &[usize],
    plan: &TrialPlan,
    include_bound_rows: bool,
) -> Result<String, RunError> {
    check_j_list(j_list)?;
    let mut csv = String::from("eta_s,power_db,j,eps_hat,ci95,eps_closed_form_or_bound\n");
    for &eta_s in eta_list {
        let derived;
        let grid = match power_override {
            Some(grid) => grid,
            None => {
                derived = default_power_grid_db(eta_s)?;
                &derived
            }
        };
        for &p_db in grid {
            let p = db_to_linear(p_db);
            for &j in j_list {
                let cfg = ScenarioConfig::new(eta_s, j, p)?;
                let est = estimate_individual_outage(&cfg, plan);
                let reference = if j == 1 {
                    fmt_prob(oma_outage(eta_s, p)?)
                } else {
                    String::new()
                };
                csv.push_str(&format!(
                    "{eta_s},{},{j},{},{},{reference}\n",
                    fmt_db(p_db),
                    fmt_prob(est.eps_hat),
                    fmt_prob(est.ci_halfwidth_95),
                ));
            }
            if include_bound_rows {
                csv.push_str(&format!(
                    "{eta_s},{},inf,,,{}\n",
                    fmt_db(p_db),
                    fmt_prob(noma_outage_lower_bound(eta_s, p)?),
                ));
            }
        }
    }
    Ok(csv)
}

/// Simulated gain versus superposition factor with its upper bound: the
/// `gain` command and the gain-versus-users figure share this schema.
pub fn gain_table_csv(
    eta_list: &[f64],
    epsilon: f64,
    j_list: &[usize],
    plan: &TrialPlan,
    tol_db: f64,
) -> Result<String, RunError> {
    check_j_list(j_list)?;
    let mut csv = String::from("eta_s,j,gain_db,gain_ci_db,gain_upper_bound_db\n");
    for &eta_s in eta_list {
        let bound = mud_gain_upper_bound(eta_s, epsilon)?;
        for sample in mud_gain_samples(eta_s, epsilon, j_list, plan, tol_db)? {
            csv.push_str(&format!(
                "{eta_s},{},{},{},{}\n",
                sample.j_users,
                fmt_db(sample.gain_db),
                fmt_db(sample.gain_ci_db),
                fmt_db(bound),
            ));
        }
    }
    Ok(csv)
}

/// Gain versus sum spectral efficiency at fixed outage target, with the
/// bound and the fraction of it that each finite system realizes.
pub fn gain_vs_eta_csv(
    eta_list: &[f64],
    epsilon: f64,
    j_list: &[usize],
    plan: &TrialPlan,
    tol_db: f64,
) -> Result<String, RunError> {
    check_j_list(j_list)?;
    let mut csv = String::from("eta_s,j,gain_db,gain_upper_bound_db,fraction_of_bound\n");
    for &eta_s in eta_list {
        let bound = mud_gain_upper_bound(eta_s, epsilon)?;
        for sample in mud_gain_samples(eta_s, epsilon, j_list, plan, tol_db)? {
            csv.push_str(&format!(
                "{eta_s},{},{},{},{:.4}\n",
                sample.j_users,
                fmt_db(sample.gain_db),
                fmt_db(bound),
                sample.gain_db / bound,
            ));
        }
    }
    Ok(csv)
}

/// Outage estimates at explicitly given powers: the `simulate` command.
pub fn simulate_table_csv(
    eta_list: &[f64],
    power_db_list: &[f64],
    j_list: &[usize],
    plan: &TrialPlan,
) -> Result<String, RunError> {
    check_j_list(j_list)?;
    let mut csv = String::from("eta_s,power_db,j,eps_hat,ci95\n");
    for &eta_s in eta_list {
        for &p_db in power_db_list {
            let p = db_to_linear(p_db);
            for &j in j_list {
                let cfg = ScenarioConfig::new(eta_s, j, p)?;
                let est = estimate_individual_outage(&cfg, plan);
                csv.push_str(&format!(
                    "{eta_s},{},{j},{},{}\n",
                    fmt_db(p_db),
                    fmt_prob(est.eps_hat),
                    fmt_prob(est.ci_halfwidth_95),
                ));
            }
        }
    }
    Ok(csv)
}

/// Required power per superposition factor: the `power-search` command.
pub fn power_search_table_csv(
    eta_list: &[f64],
    epsilon: f64,
    j_list: &[usize],
    plan: &TrialPlan,
    tol_db: f64,
) -> Result<String, RunError> {
    check_j_list(j_list)?;
    let mut csv = String::from("eta_s,epsilon,j,power_db,power_linear\n");
    for &eta_s in eta_list {
        for &j in j_list {
            let p = if j == 1 {
                // The single-user system has a closed form; simulating it
                // would only add noise.
                oma_required_power(eta_s, epsilon)?
            } else {
                required_power(eta_s, j, epsilon, plan, tol_db)?
            };
            csv.push_str(&format!(
                "{eta_s},{epsilon},{j},{},{:.6}\n",
                fmt_db(linear_to_db(p)),
                p,
            ));
        }
    }
    Ok(csv)
}
