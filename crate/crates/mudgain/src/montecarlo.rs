//! Deterministic Monte-Carlo engine for individual-outage estimation and
//! required-power search.
//!
//! Three commitments shape this module:
//!
//! * **Determinism under parallelism.** Every channel parameter is a pure
//!   function of `(seed, trial_index, user_index)` through a counter-based
//!   keyed generator, and trial outcomes merge by integer addition, so the
//!   result is bit-identical for any worker count or schedule.
//! * **Common random numbers.** The draws never depend on the power budget
//!   — scaling power just scales the per-user SNRs of the same draws — so
//!   one logical draw set serves every probed power of a search, making the
//!   estimated outage a deterministic, monotone step function of power. The
//!   bisection in [`required_power`] needs nothing fancier.
//! * **Pooled counting.** Users are symmetric and exchangeable, so the
//!   estimator counts outage events across all `J` users of every block:
//!   a `J`-fold variance reduction at no bias.
//!
//! The engine always decodes through the symmetric prefix path (the scenario
//! is symmetric by construction), which is what lets it reach `J = 100`
//! where exhaustive subset enumeration is unthinkable.

use rayon::prelude::*;

use crate::analytics::{
    noma_outage_lower_bound, noma_power_lower_bound, oma_required_power, CurveKind, GainPoint,
};
use crate::model::{per_user_snr, per_user_target_se, ChannelDraw, ScenarioConfig};
use crate::region::max_prefix_size;
use crate::{db_to_linear, linear_to_db, Error, Result};

/// Two-sided 95% normal quantile used by the Wilson interval.
pub const WILSON_Z_95: f64 = 1.959963984540054;

/// Trials per parallel work unit. Fixed by constant — never by worker count
/// — so the trial-to-chunk assignment, and with it every result bit, is
/// schedule-independent.
const TRIAL_CHUNK: u64 = 16384;

/// Reproducible trial schedule: a seed plus a number of channel-block draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub seed: u64,
    pub trials: u64,
}

impl TrialPlan {
    pub fn new(seed: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        Ok(Self { seed, trials })
    }
}

/// Estimated individual outage probability with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    /// `outage_user_blocks / (J * trials)`.
    pub eps_hat: f64,
    /// Channel-block draws behind the estimate.
    pub trials: u64,
    /// Count of (user, block) pairs in individual outage.
    pub outage_user_blocks: u64,
    /// Total (user, block) pairs observed, `J * trials`.
    pub user_blocks: u64,
    /// Half the width of the 95% Wilson interval.
    pub ci_halfwidth_95: f64,
}

impl OutageEstimate {
    fn from_counts(outage_user_blocks: u64, trials: u64, user_blocks: u64) -> Self {
        Self {
            eps_hat: outage_user_blocks as f64 / user_blocks as f64,
            trials,
            outage_user_blocks,
            user_blocks,
            ci_halfwidth_95: wilson_halfwidth_95(outage_user_blocks, user_blocks),
        }
    }

    /// The 95% Wilson interval itself (its center sits slightly off
    /// `eps_hat` by construction).
    pub fn wilson_bounds_95(&self) -> (f64, f64) {
        wilson_interval_95(self.outage_user_blocks, self.user_blocks)
    }
}

// ---------------------------------------------------------------------------
// Counter-based generator
// ---------------------------------------------------------------------------

/// Weyl-sequence increment: the odd integer closest to 2^64 / phi.
const SEED_PHI: u64 = 0x9E37_79B9_7F4A_7C15;

/// 64-bit finalizer with full avalanche; three applications keyed on seed,
/// trial, and user give independent-looking streams without any sequential
/// state.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn run_key(seed: u64) -> u64 {
    mix(seed ^ SEED_PHI)
}

#[inline]
fn trial_key(run_key: u64, trial_index: u64) -> u64 {
    mix(run_key ^ trial_index)
}

/// Uniform in `[0, 1)` from the top 53 bits of a mixed word.
#[inline]
fn uniform01(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Inverse-CDF transform to `Exp(1)`; `u = 0` maps to exactly zero and the
/// `ln_1p` form keeps small quantiles exact.
#[inline]
fn exp1_from_uniform(u: f64) -> f64 {
    -(-u).ln_1p()
}

#[inline]
fn channel_gain(trial_key: u64, user_index: u64) -> f64 {
    exp1_from_uniform(uniform01(mix(trial_key ^ user_index)))
}

/// The `Exp(1)` channel parameters of one block, keyed on
/// `(seed, trial_index, user_index)`: deterministic, order-independent, and
/// identical no matter which worker asks.
pub fn sample_channels(j_users: usize, trial_index: u64, seed: u64) -> ChannelDraw {
    let tk = trial_key(run_key(seed), trial_index);
    ChannelDraw {
        gains: (0..j_users).map(|u| channel_gain(tk, u as u64)).collect(),
    }
}

// ---------------------------------------------------------------------------
// Wilson interval
// ---------------------------------------------------------------------------

/// 95% Wilson score interval for `events` successes in `n` Bernoulli trials,
/// clamped to `[0, 1]`. Stays honest at zero or near-zero event counts,
/// where the normal approximation collapses.
pub fn wilson_interval_95(events: u64, n: u64) -> (f64, f64) {
    assert!(n > 0, "Wilson interval needs at least one observation");
    let nf = n as f64;
    let p = events as f64 / nf;
    let z2 = WILSON_Z_95 * WILSON_Z_95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let hw = WILSON_Z_95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    // At degenerate counts the score interval touches the edge exactly;
    // don't let sqrt rounding leave a stray 1e-18 there.
    let lo = if events == 0 { 0.0 } else { (center - hw).max(0.0) };
    let hi = if events == n { 1.0 } else { (center + hw).min(1.0) };
    (lo, hi)
}

/// Half the width of the (unclamped) 95% Wilson interval.
pub fn wilson_halfwidth_95(events: u64, n: u64) -> f64 {
    assert!(n > 0, "Wilson interval needs at least one observation");
    let nf = n as f64;
    let p = events as f64 / nf;
    let z2 = WILSON_Z_95 * WILSON_Z_95;
    let denom = 1.0 + z2 / nf;
    WILSON_Z_95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom
}

// ---------------------------------------------------------------------------
// Outage estimation
// ---------------------------------------------------------------------------

/// Estimates the individual outage probability of one scenario by Monte
/// Carlo: draw a block, decode through the symmetric prefix path, count the
/// users left out, pooled over all `J` users of all trials.
pub fn estimate_individual_outage(cfg: &ScenarioConfig, plan: &TrialPlan) -> OutageEstimate {
    let j = cfg.j_users;
    let r_common = per_user_target_se(cfg);
    let rk = run_key(plan.seed);

    let chunks = plan.trials.div_ceil(TRIAL_CHUNK);
    let outage: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * TRIAL_CHUNK;
            let hi = (lo + TRIAL_CHUNK).min(plan.trials);
            let mut snrs = vec![0.0f64; j];
            let mut count = 0u64;
            for t in lo..hi {
                let tk = trial_key(rk, t);
                for (u, slot) in snrs.iter_mut().enumerate() {
                    *slot = per_user_snr(channel_gain(tk, u as u64), cfg);
                }
                snrs.sort_unstable_by(|a, b| b.total_cmp(a));
                count += (j - max_prefix_size(r_common, &snrs)) as u64;
            }
            count
        })
        .sum();

    OutageEstimate::from_counts(outage, plan.trials, j as u64 * plan.trials)
}

// ---------------------------------------------------------------------------
// Required power by common-random-number bisection
// ---------------------------------------------------------------------------

/// Smallest normalized sum power (linear) at which the simulated individual
/// outage meets `eps_target`, found by bisection in dB to within `tol_db`.
///
/// The draws are fixed by `plan` and shared by every probed power, so the
/// estimated outage is a deterministic non-increasing step function of power
/// and the bisection is well-posed. The bracket comes from the closed forms:
/// the infinite-user bound power minus 1 dB below (no finite system does
/// better than the bound) and the orthogonal power plus 1 dB above (`J`
/// users jointly decode at least as well as one alone does).
pub fn required_power(
    eta_s: f64,
    j_users: usize,
    eps_target: f64,
    plan: &TrialPlan,
    tol_db: f64,
) -> Result<f64> {
    if !(tol_db.is_finite() && tol_db > 0.0) {
        return Err(Error::Domain(format!(
            "tol_db must be positive and finite, got {tol_db}"
        )));
    }
    let lo_db = linear_to_db(noma_power_lower_bound(eta_s, eps_target)?) - 1.0;
    let hi_db = linear_to_db(oma_required_power(eta_s, eps_target)?) + 1.0;

    let eval = |p_db: f64| -> Result<f64> {
        let cfg = ScenarioConfig::new(eta_s, j_users, db_to_linear(p_db))?;
        Ok(estimate_individual_outage(&cfg, plan).eps_hat)
    };

    if eval(hi_db)? > eps_target {
        return Err(Error::BracketFailure {
            lo_db,
            hi_db,
            target: eps_target,
            detail: "outage still above target at the upper end of the window".into(),
        });
    }
    if eval(lo_db)? <= eps_target {
        return Err(Error::BracketFailure {
            lo_db,
            hi_db,
            target: eps_target,
            detail: "target already met at the lower end of the window".into(),
        });
    }

    let (mut lo, mut hi) = (lo_db, hi_db);
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? <= eps_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(db_to_linear(hi))
}

// ---------------------------------------------------------------------------
// Gain and bound curves
// ---------------------------------------------------------------------------

/// One simulated point of the gain-versus-`J` story, with enough context to
/// report an uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSample {
    pub j_users: usize,
    /// Simulated required power for this `J`, dB (closed form at `J = 1`).
    pub power_db: f64,
    /// Power saving over the orthogonal reference, dB.
    pub gain_db: f64,
    /// Propagated 95% halfwidth of the gain, dB.
    pub gain_ci_db: f64,
}

impl GainSample {
    pub fn as_gain_point(&self) -> GainPoint {
        GainPoint {
            abscissa: self.j_users as f64,
            gain_db: self.gain_db,
            kind: CurveKind::VsJ,
        }
    }
}

/// Magnitude of the outage-versus-power slope `|d eps / d p_dB|` at level
/// `eps` for outage laws of the form `1 - exp(-c / p)` — both the
/// single-user law and the infinite-user bound have this shape, and the
/// simulated finite-`J` curves track it closely near the usual targets. Used
/// to convert an outage confidence width into a power (and hence gain) width.
fn outage_slope_per_db(eps: f64) -> f64 {
    (1.0 - eps) * -(-eps).ln_1p() * std::f64::consts::LN_10 / 10.0
}

/// Simulated MUD gain across a list of superposition factors, with the
/// orthogonal anchor taken from the closed form (not simulated) so its noise
/// does not contaminate every point of the curve. `J = 1` therefore reports
/// exactly zero gain.
pub fn mud_gain_samples(
    eta_s: f64,
    eps_target: f64,
    j_list: &[usize],
    plan: &TrialPlan,
    tol_db: f64,
) -> Result<Vec<GainSample>> {
    if j_list.is_empty() {
        return Err(Error::Domain("j_list must be nonempty".into()));
    }
    if let Some(&bad) = j_list.iter().find(|j| **j == 0) {
        return Err(Error::Domain(format!("every J must be at least 1, got {bad}")));
    }
    let p_oma_db = linear_to_db(oma_required_power(eta_s, eps_target)?);
    let slope = outage_slope_per_db(eps_target);

    j_list
        .iter()
        .map(|&j| {
            if j == 1 {
                return Ok(GainSample {
                    j_users: 1,
                    power_db: p_oma_db,
                    gain_db: 0.0,
                    gain_ci_db: 0.0,
                });
            }
            let p = required_power(eta_s, j, eps_target, plan, tol_db)?;
            let p_db = linear_to_db(p);
            let at_solution =
                estimate_individual_outage(&ScenarioConfig::new(eta_s, j, p)?, plan);
            Ok(GainSample {
                j_users: j,
                power_db: p_db,
                gain_db: p_oma_db - p_db,
                gain_ci_db: at_solution.ci_halfwidth_95 / slope,
            })
        })
        .collect()
}

/// [`mud_gain_samples`] reduced to bare curve points.
pub fn mud_gain_curve(
    eta_s: f64,
    eps_target: f64,
    j_list: &[usize],
    plan: &TrialPlan,
    tol_db: f64,
) -> Result<Vec<GainPoint>> {
    Ok(mud_gain_samples(eta_s, eps_target, j_list, plan, tol_db)?
        .iter()
        .map(GainSample::as_gain_point)
        .collect())
}

/// One power grid point of the outage/bound comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundComparisonRow {
    pub p_db: f64,
    /// One estimate per entry of the requested `j_list`, in order.
    pub estimates: Vec<OutageEstimate>,
    /// The infinite-user outage lower bound at this power.
    pub bound: f64,
}

/// Simulated individual outage for each `J` across a power grid, next to the
/// infinite-user lower bound: the data behind the bound-comparison figure.
pub fn bound_comparison_curve(
    eta_s: f64,
    p_db_grid: &[f64],
    j_list: &[usize],
    plan: &TrialPlan,
) -> Result<Vec<BoundComparisonRow>> {
    if p_db_grid.is_empty() {
        return Err(Error::Domain("power grid must be nonempty".into()));
    }
    if j_list.is_empty() {
        return Err(Error::Domain("j_list must be nonempty".into()));
    }
    p_db_grid
        .iter()
        .map(|&p_db| {
            let p = db_to_linear(p_db);
            let estimates = j_list
                .iter()
                .map(|&j| {
                    Ok(estimate_individual_outage(
                        &ScenarioConfig::new(eta_s, j, p)?,
                        plan,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(BoundComparisonRow {
                p_db,
                estimates,
                bound: noma_outage_lower_bound(eta_s, p)?,
            })
        })
        .collect()
}
