//! Multiuser-diversity gain of superposed transmission on a block-fading
//! multiple-access channel.
//!
//! `J` users share one subchannel of a Rayleigh block-fading uplink and are
//! recovered by a joint decoder; the orthogonal reference gives every user a
//! private subchannel (`J = 1`). At equal sum spectral efficiency and equal
//! individual-outage target, the superposed system needs less sum power, and
//! the saving — the multiuser-diversity (MUD) gain, in dB — grows with `J`
//! toward a closed-form ceiling. This crate computes that story end to end:
//!
//! * [`model`] — the normalized scenario: sum spectral efficiency `eta_s`,
//!   superposition factor `j_users`, sum power budget `p_norm` (noise power
//!   normalized to one), and the per-user SNR/rate mapping.
//! * [`analytics`] — closed forms: orthogonal outage and required power, the
//!   finite-`K` single-user decodability threshold with its Taylor expansion,
//!   the infinite-user outage/power bounds, and the MUD gain ceiling.
//! * [`region`] — instantaneous MAC capacity-region membership and per-user
//!   decodability under joint decoding, with an exhaustive reference
//!   evaluator and an `O(J^2)` fast path for symmetric rates.
//! * [`montecarlo`] — a deterministic, parallel trial engine: outage
//!   estimation with Wilson confidence intervals, common-random-number
//!   bisection for required power, and the gain/bound comparison curves.
//!
//! Determinism is a design contract, not an accident: every channel draw is a
//! pure function of `(seed, trial_index, user_index)`, so results are
//! bit-identical across worker counts and schedules.

pub mod analytics;
pub mod model;
pub mod montecarlo;
pub mod region;

/// Errors surfaced by scenario validation, the exhaustive region evaluator,
/// and the power search.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument left its mathematical domain (nonpositive power, outage
    /// target outside `(0, 1)`, mismatched vector lengths, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The exhaustive subset evaluator was asked for more users than its
    /// enumeration cap; the symmetric fast path has no such limit.
    #[error("exhaustive subset enumeration supports at most {limit} users, got {j_users}")]
    SubsetLimitExceeded { j_users: usize, limit: usize },

    /// The bisection bracket failed to isolate the target outage: the target
    /// is unreachable inside the search window (or already met at its lower
    /// end), signalling that the window assumptions do not hold.
    #[error(
        "power search bracket [{lo_db:.2} dB, {hi_db:.2} dB] does not isolate outage target {target}: {detail}"
    )]
    BracketFailure {
        lo_db: f64,
        hi_db: f64,
        target: f64,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Converts a linear power ratio to decibels, `10 * log10(x)`.
///
/// ```
/// assert_eq!(mudgain::linear_to_db(100.0), 20.0);
/// ```
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Converts decibels back to a linear power ratio, `10^(db / 10)`.
///
/// ```
/// assert_eq!(mudgain::db_to_linear(20.0), 100.0);
/// ```
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
