//! Normalized system parameterization and the per-user SNR/rate mapping.
//!
//! Everything downstream works on three normalized quantities: the sum
//! spectral efficiency `eta_s` (bits/s/Hz over the total bandwidth), the
//! superposition factor `j_users` (how many users share one subchannel;
//! `J = 1` is the orthogonal reference), and the normalized sum power budget
//! `p_norm` (sum transmit power over total noise power, linear). The absolute
//! bandwidth, rate, and noise figures never appear on their own — only these
//! ratios do.
//!
//! A system of `K` total users splits its band into `K/J` subchannels with
//! `J` users each. Because users are symmetric and subchannels fade
//! independently with identical statistics, one subchannel carries all the
//! information: per-user statistics do not depend on `K`. `k_total` is
//! therefore optional metadata, validated but never consulted by the
//! numerics.

use crate::{Error, Result};

/// One normalized operating point of the system.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Sum spectral efficiency `eta_s`, bits/s/Hz, positive.
    pub eta_s: f64,
    /// Superposition factor `J`: users sharing one subchannel; `1` = OMA.
    pub j_users: usize,
    /// Normalized sum power budget `P_s / (N_0 W)`, linear, positive.
    pub p_norm: f64,
    /// Optional total user count `K`; must be divisible by `j_users`.
    /// Metadata only: no derived quantity reads it.
    pub k_total: Option<usize>,
}

impl ScenarioConfig {
    /// Builds a validated scenario without a total user count.
    pub fn new(eta_s: f64, j_users: usize, p_norm: f64) -> Result<Self> {
        if !(eta_s.is_finite() && eta_s > 0.0) {
            return Err(Error::Domain(format!(
                "eta_s must be positive and finite, got {eta_s}"
            )));
        }
        if j_users == 0 {
            return Err(Error::Domain("j_users must be at least 1".into()));
        }
        if !(p_norm.is_finite() && p_norm > 0.0) {
            return Err(Error::Domain(format!(
                "p_norm must be positive and finite, got {p_norm}"
            )));
        }
        Ok(Self {
            eta_s,
            j_users,
            p_norm,
            k_total: None,
        })
    }

    /// Attaches a total user count, enforcing divisibility by `j_users`.
    pub fn with_k_total(mut self, k_total: usize) -> Result<Self> {
        if k_total == 0 {
            return Err(Error::Domain("k_total must be at least 1".into()));
        }
        if !k_total.is_multiple_of(self.j_users) {
            return Err(Error::Domain(format!(
                "k_total {} is not divisible by j_users {}",
                k_total, self.j_users
            )));
        }
        self.k_total = Some(k_total);
        Ok(self)
    }

    /// The power budget in dB; storage stays linear so hot loops never pay
    /// for the conversion.
    pub fn p_norm_db(&self) -> f64 {
        crate::linear_to_db(self.p_norm)
    }
}

/// One block's channel parameters `H_k = |h_k|^2` for the `J` users of a
/// subchannel. The sampler draws the entries i.i.d. `Exp(1)` (unit-mean
/// Rayleigh power fading).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    /// Nonnegative channel parameters, one per user; length equals `j_users`.
    pub gains: Vec<f64>,
}

/// Received SNR of a user with channel parameter `h` when the sum power is
/// split evenly across the `J` users of the subchannel: `h * p_norm / J`.
///
/// Independent of `k_total` by construction.
pub fn per_user_snr(h: f64, cfg: &ScenarioConfig) -> f64 {
    debug_assert!(h >= 0.0, "channel parameter must be nonnegative");
    h * cfg.p_norm / cfg.j_users as f64
}

/// Target spectral efficiency each user must sustain on the shared
/// subchannel: the band splits into `K/J` subchannels so each user's rate
/// share works out to `eta_s / J` regardless of `K`.
pub fn per_user_target_se(cfg: &ScenarioConfig) -> f64 {
    cfg.eta_s / cfg.j_users as f64
}
