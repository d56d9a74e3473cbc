//! Closed-form outage, power, and gain formulas.
//!
//! The orthogonal (J = 1) side has an exact outage law and its exact inverse;
//! the superposed side has a closed-form *infinite-user* limit that lower
//! bounds outage (equivalently, lower bounds the required power) for every
//! finite `J`. Subtracting the two power requirements in dB yields the
//! multiuser-diversity gain and its ceiling:
//!
//! * [`oma_outage`] / [`oma_required_power`] — a Rayleigh link in outage iff
//!   its channel parameter falls below `(2^eta_s - 1) / p`, giving
//!   `eps = 1 - exp(-(2^eta_s - 1)/p)` and its inverse.
//! * [`single_user_threshold`] — the decodability threshold
//!   `k (2^(eta_s/k) - 1) / p` on the channel parameter when a user must
//!   carry spectral efficiency `eta_s/k` free of interference; it falls
//!   monotonically toward `eta_s ln2 / p` as `k` grows.
//! * [`threshold_taylor_first_order`] — its two-term expansion in `1/k`,
//!   useful for seeing the `O(1/k)` approach to the limit.
//! * [`noma_outage_lower_bound`] / [`noma_power_lower_bound`] — the
//!   infinite-user limit `eps = 1 - 2^(-eta_s/p)` and its inverse.
//! * [`mud_gain`] / [`mud_gain_upper_bound`] — the dB power saving and its
//!   closed-form ceiling.
//!
//! Small probabilities are kept exact with `exp_m1`/`ln_1p` formulations
//! throughout; `1 - exp(x)` style arithmetic would lose digits right where
//! the interesting targets live (`eps <= 0.01`).

use std::f64::consts::LN_2;

use crate::{linear_to_db, Error, Result};

/// Which sweep a [`GainPoint`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Gain versus superposition factor `J` at fixed `eta_s`.
    VsJ,
    /// Gain versus sum spectral efficiency at fixed `J`.
    VsEta,
    /// The closed-form ceiling rather than a simulated point.
    UpperBound,
}

/// One point of a multiuser-diversity gain curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPoint {
    /// `J` (as a real) for [`CurveKind::VsJ`], `eta_s` for the others.
    pub abscissa: f64,
    /// MUD gain in dB.
    pub gain_db: f64,
    pub kind: CurveKind,
}

fn check_eta(eta_s: f64) -> Result<()> {
    if eta_s.is_finite() && eta_s > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "eta_s must be positive and finite, got {eta_s}"
        )))
    }
}

fn check_power(p_norm: f64) -> Result<()> {
    if p_norm.is_finite() && p_norm > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "p_norm must be positive and finite, got {p_norm}"
        )))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && 0.0 < eps && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "outage target must lie strictly inside (0, 1), got {eps}"
        )))
    }
}

/// `2^eta_s - 1`, evaluated as `exp_m1(eta_s * ln 2)` so small `eta_s` keeps
/// full precision.
fn pow2_m1(eta_s: f64) -> f64 {
    (eta_s * LN_2).exp_m1()
}

/// Individual outage probability of the orthogonal reference:
/// `1 - exp(-(2^eta_s - 1) / p_norm)`.
///
/// ```
/// let eps = mudgain::analytics::oma_outage(3.0, 696.494).unwrap();
/// assert!((eps - 0.01).abs() < 1e-6);
/// ```
pub fn oma_outage(eta_s: f64, p_norm: f64) -> Result<f64> {
    check_eta(eta_s)?;
    check_power(p_norm)?;
    Ok(-(-pow2_m1(eta_s) / p_norm).exp_m1())
}

/// Sum power the orthogonal reference needs to hit outage target `eps`:
/// `-(2^eta_s - 1) / ln(1 - eps)`. Exact inverse of [`oma_outage`].
pub fn oma_required_power(eta_s: f64, eps: f64) -> Result<f64> {
    check_eta(eta_s)?;
    check_eps(eps)?;
    Ok(-pow2_m1(eta_s) / (-eps).ln_1p())
}

/// Channel-parameter threshold below which a user cannot carry spectral
/// efficiency `eta_s / k` even interference-free: `k (2^(eta_s/k) - 1) / p`.
///
/// Strictly decreasing in `k`, with infimum `eta_s * ln2 / p_norm`.
pub fn single_user_threshold(eta_s: f64, k: u64, p_norm: f64) -> Result<f64> {
    check_eta(eta_s)?;
    check_power(p_norm)?;
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let kf = k as f64;
    Ok(kf * pow2_m1(eta_s / kf) / p_norm)
}

/// Two-term expansion of [`single_user_threshold`] around `k = infinity`:
/// `(eta_s ln2 + (eta_s ln2)^2 / (2k)) / p_norm`. The gap to the exact
/// threshold shrinks as `o(1/k)`.
pub fn threshold_taylor_first_order(eta_s: f64, k: u64, p_norm: f64) -> Result<f64> {
    check_eta(eta_s)?;
    check_power(p_norm)?;
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let c = eta_s * LN_2;
    Ok((c + c * c / (2.0 * k as f64)) / p_norm)
}

/// Infinite-user lower bound on individual outage probability:
/// `1 - 2^(-eta_s / p_norm)`. Every finite-`J` system sits above it.
pub fn noma_outage_lower_bound(eta_s: f64, p_norm: f64) -> Result<f64> {
    check_eta(eta_s)?;
    check_power(p_norm)?;
    Ok(-(-eta_s * LN_2 / p_norm).exp_m1())
}

/// Infinite-user lower bound on the sum power needed for outage target
/// `eps`: `-eta_s / log2(1 - eps)`. Exact inverse of
/// [`noma_outage_lower_bound`].
pub fn noma_power_lower_bound(eta_s: f64, eps: f64) -> Result<f64> {
    check_eta(eta_s)?;
    check_eps(eps)?;
    Ok(-eta_s * LN_2 / (-eps).ln_1p())
}

/// Multiuser-diversity gain: the dB saving of a superposed system over the
/// orthogonal reference, `p_oma_db - p_noma_db`.
pub fn mud_gain(p_oma_db: f64, p_noma_db: f64) -> f64 {
    p_oma_db - p_noma_db
}

/// Ceiling on the multiuser-diversity gain: the orthogonal power requirement
/// minus the infinite-user power bound, both in dB.
///
/// Kept literally as that difference — the two `eps`-dependent factors
/// cancel algebraically, but evaluating the composition keeps this function
/// exactly consistent with [`mud_gain`] over [`oma_required_power`] and
/// [`noma_power_lower_bound`].
pub fn mud_gain_upper_bound(eta_s: f64, eps: f64) -> Result<f64> {
    let p_oma = oma_required_power(eta_s, eps)?;
    let p_lb = noma_power_lower_bound(eta_s, eps)?;
    Ok(mud_gain(linear_to_db(p_oma), linear_to_db(p_lb)))
}
