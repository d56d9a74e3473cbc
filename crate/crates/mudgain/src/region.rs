//! Instantaneous MAC capacity-region membership and per-user decodability
//! under joint decoding.
//!
//! A set `D` of users is *decodable* when the rate vector restricted to `D`
//! lies inside the Gaussian MAC capacity region computed with everybody
//! outside `D` treated as extra Gaussian noise: for every nonempty
//! `S ⊆ D`,
//!
//! ```text
//! sum_{k in S} r_k <= log2(1 + sum_{k in S} g_k / (1 + noise))
//! ```
//!
//! with `noise = sum_{i not in D} g_i`. A user is in *individual outage*
//! exactly when no decodable set contains it — success or failure of the
//! other users' decoding cannot rescue it. Boundary equality counts as
//! decodable: outage is a strict "rate exceeds capacity" event, which also
//! pins down determinism for ties.
//!
//! Two evaluators implement that definition:
//!
//! * [`per_user_decodable`] — the exhaustive reference: every candidate set,
//!   every subset constraint. Exponential, capped at
//!   [`MAX_EXHAUSTIVE_USERS`]; exists to be obviously correct.
//! * [`symmetric_prefix_decodable`] — the production path for the symmetric
//!   scenario (equal rates). Only SNR-descending prefixes can be maximal
//!   decodable sets, and within a prefix only the "weakest `i` members"
//!   constraints bind, so `O(J^2)` checks suffice after sorting. Agreement
//!   with the exhaustive evaluator is property-tested, never assumed.
//!
//! Both paths funnel every comparison through the same [`rate_fits`]
//! primitive so a draw near the region boundary cannot be judged by two
//! different roundings of the same constraint.

use crate::{Error, Result};

/// Cap on exhaustive subset enumeration (`2^J` candidate sets with up to
/// `2^J` constraints each). Past this, only the symmetric fast path runs.
pub const MAX_EXHAUSTIVE_USERS: usize = 25;

/// Largest `J` for which the exhaustive evaluator materializes full subset-sum
/// tables (`2^J` doubles per vector); above this it recomputes sums per mask
/// to keep memory flat.
const DENSE_TABLE_USERS: usize = 20;

/// Per-user target spectral efficiencies on the shared subchannel.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    rates: Vec<f64>,
}

impl RateVector {
    /// Validates a nonempty vector of finite, nonnegative rates.
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::Domain("rate vector must be nonempty".into()));
        }
        if let Some(bad) = rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::Domain(format!(
                "rates must be finite and nonnegative, got {bad}"
            )));
        }
        Ok(Self { rates })
    }

    /// A symmetric vector: `j_users` copies of `r_common`.
    pub fn symmetric(r_common: f64, j_users: usize) -> Result<Self> {
        Self::new(vec![r_common; j_users.max(1)])
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.rates
    }
}

/// Per-user received SNRs, linear.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrVector {
    snrs: Vec<f64>,
}

impl SnrVector {
    /// Validates a nonempty vector of finite, nonnegative SNRs.
    pub fn new(snrs: Vec<f64>) -> Result<Self> {
        if snrs.is_empty() {
            return Err(Error::Domain("SNR vector must be nonempty".into()));
        }
        if let Some(bad) = snrs.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
            return Err(Error::Domain(format!(
                "SNRs must be finite and nonnegative, got {bad}"
            )));
        }
        Ok(Self { snrs })
    }

    pub fn len(&self) -> usize {
        self.snrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snrs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.snrs
    }
}

/// Decodability verdict for one channel draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    /// `decodable[k]` is true iff some decodable set contains user `k`; the
    /// complement is the individual-outage set of this draw.
    pub decodable: Vec<bool>,
    /// A decodable set of maximum cardinality, as ascending user indices.
    pub max_decodable_set: Vec<usize>,
}

/// `log2(1 + x)` through `ln_1p`, which keeps precision for the
/// near-threshold draws that dominate outage statistics.
#[inline]
pub(crate) fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// The one constraint primitive both evaluators share: can a subset with
/// total rate `rate_sum` and total SNR `gain_sum` fit over noise floor
/// `1 + noise`? Boundary equality fits. Evaluated in plain double precision
/// with no tolerance: a fudge factor would bias outage estimates.
#[inline]
fn rate_fits(rate_sum: f64, gain_sum: f64, noise: f64) -> bool {
    rate_sum <= log2_1p(gain_sum / (1.0 + noise))
}

fn check_pair(rates: &RateVector, snrs: &SnrVector) -> Result<usize> {
    if rates.len() != snrs.len() {
        return Err(Error::Domain(format!(
            "rate/SNR length mismatch: {} vs {}",
            rates.len(),
            snrs.len()
        )));
    }
    Ok(rates.len())
}

fn check_exhaustive_cap(j_users: usize) -> Result<()> {
    if j_users > MAX_EXHAUSTIVE_USERS {
        Err(Error::SubsetLimitExceeded {
            j_users,
            limit: MAX_EXHAUSTIVE_USERS,
        })
    } else {
        Ok(())
    }
}

/// Subset-sum lookup: dense tables up to [`DENSE_TABLE_USERS`], per-mask
/// accumulation above. Both orderings add elements from the highest set bit
/// down so the two representations produce bit-identical sums.
enum SubsetSums<'a> {
    Dense(Vec<f64>),
    Sparse(&'a [f64]),
}

impl<'a> SubsetSums<'a> {
    fn build(values: &'a [f64]) -> Self {
        if values.len() <= DENSE_TABLE_USERS {
            let mut table = vec![0.0; 1 << values.len()];
            for mask in 1..table.len() {
                let low = mask.trailing_zeros() as usize;
                table[mask] = table[mask & (mask - 1)] + values[low];
            }
            SubsetSums::Dense(table)
        } else {
            SubsetSums::Sparse(values)
        }
    }

    #[inline]
    fn sum(&self, mask: usize) -> f64 {
        match self {
            SubsetSums::Dense(table) => table[mask],
            SubsetSums::Sparse(values) => {
                let mut rest = mask;
                let mut total = 0.0;
                while rest != 0 {
                    let high = usize::BITS - 1 - rest.leading_zeros();
                    total += values[high as usize];
                    rest &= !(1usize << high);
                }
                total
            }
        }
    }
}

/// Does the whole rate vector fit in the capacity region over an extra noise
/// floor? Checks all `2^J - 1` nonempty-subset constraints exhaustively.
pub fn in_capacity_region(rates: &RateVector, snrs: &SnrVector, noise_extra: f64) -> Result<bool> {
    let j = check_pair(rates, snrs)?;
    if !(noise_extra.is_finite() && noise_extra >= 0.0) {
        return Err(Error::Domain(format!(
            "noise_extra must be finite and nonnegative, got {noise_extra}"
        )));
    }
    check_exhaustive_cap(j)?;

    let rate_sums = SubsetSums::build(rates.as_slice());
    let gain_sums = SubsetSums::build(snrs.as_slice());
    let full = (1usize << j) - 1;
    for mask in 1..=full {
        if !rate_fits(rate_sums.sum(mask), gain_sums.sum(mask), noise_extra) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The exhaustive reference for per-user decodability: enumerates every
/// candidate set `D`, tests it with its complement as noise, and ORs the
/// decodable ones together. Deliberately definition-shaped rather than
/// clever; the symmetric fast path is measured against it.
pub fn per_user_decodable(rates: &RateVector, snrs: &SnrVector) -> Result<DecodeReport> {
    let j = check_pair(rates, snrs)?;
    check_exhaustive_cap(j)?;

    let rate_sums = SubsetSums::build(rates.as_slice());
    let gain_sums = SubsetSums::build(snrs.as_slice());
    let full = (1usize << j) - 1;

    let mut union_mask = 0usize;
    let mut best_mask = 0usize;
    for d in (1..=full).rev() {
        let noise = gain_sums.sum(full ^ d);
        let mut sub = d;
        let decodable = loop {
            if !rate_fits(rate_sums.sum(sub), gain_sums.sum(sub), noise) {
                break false;
            }
            sub = (sub - 1) & d;
            if sub == 0 {
                break true;
            }
        };
        if decodable {
            union_mask |= d;
            if d.count_ones() > best_mask.count_ones() {
                best_mask = d;
            }
            // Nothing left to learn once every user is covered and the full
            // set itself decodes; flags cannot gain bits and no set can beat
            // cardinality J.
            if best_mask == full {
                break;
            }
        }
    }

    Ok(DecodeReport {
        decodable: (0..j).map(|k| union_mask >> k & 1 == 1).collect(),
        max_decodable_set: (0..j).filter(|k| best_mask >> k & 1 == 1).collect(),
    })
}

/// Largest `m` such that the `m` strongest entries of `sorted_desc` form a
/// decodable set at common rate `r_common`, with the remaining entries as
/// noise. `0` means even the single strongest user fails.
///
/// For equal rates, all size-`i` subsets of a prefix share one rate sum, so
/// the binding constraint at size `i` is the one with the least SNR mass —
/// the `i` weakest prefix members. Scanning those nested lumps from the
/// weakest up gives an early exit on the typical failure and `O(J)` work per
/// candidate.
pub(crate) fn max_prefix_size(r_common: f64, sorted_desc: &[f64]) -> usize {
    let mut noise = 0.0;
    for m in (1..=sorted_desc.len()).rev() {
        let mut rate_sum = 0.0;
        let mut gain_sum = 0.0;
        let mut fits = true;
        for i in 1..=m {
            rate_sum += r_common;
            gain_sum += sorted_desc[m - i];
            if !rate_fits(rate_sum, gain_sum, noise) {
                fits = false;
                break;
            }
        }
        if fits {
            return m;
        }
        noise += sorted_desc[m - 1];
    }
    0
}

/// Fast decodability for the symmetric scenario: every user targets the same
/// rate `r_common`. Sorts by SNR descending and finds the largest decodable
/// prefix; `O(J^2)` worst case, no exhaustive cap.
///
/// Must agree exactly with [`per_user_decodable`] on symmetric inputs —
/// that agreement is enforced by tests on random draws, not assumed here.
pub fn symmetric_prefix_decodable(r_common: f64, snrs: &SnrVector) -> DecodeReport {
    debug_assert!(r_common >= 0.0, "common rate must be nonnegative");
    let j = snrs.len();
    let values = snrs.as_slice();

    let mut order: Vec<usize> = (0..j).collect();
    order.sort_unstable_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();

    let m = max_prefix_size(r_common, &sorted);

    let mut decodable = vec![false; j];
    for &user in &order[..m] {
        decodable[user] = true;
    }
    let mut max_decodable_set: Vec<usize> = order[..m].to_vec();
    max_decodable_set.sort_unstable();

    DecodeReport {
        decodable,
        max_decodable_set,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rates(v: &[f64]) -> RateVector {
        RateVector::new(v.to_vec()).unwrap()
    }

    fn snrs(v: &[f64]) -> SnrVector {
        SnrVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_user_boundary_is_decodable() {
        assert!(in_capacity_region(&rates(&[1.0]), &snrs(&[1.0]), 0.0).unwrap());
        assert!(!in_capacity_region(&rates(&[1.01]), &snrs(&[1.0]), 0.0).unwrap());
    }

    #[test]
    fn two_user_hand_example_fits() {
        // Constraints: 1 <= log2(4), 1 <= log2(2), 2 <= log2(5).
        assert!(in_capacity_region(&rates(&[1.0, 1.0]), &snrs(&[3.0, 1.0]), 0.0).unwrap());
    }

    #[test]
    fn noise_floor_shrinks_the_region() {
        let r = rates(&[1.0, 1.0]);
        let g = snrs(&[3.0, 1.0]);
        // The same draw fails once an off-set interferer is added:
        // 1 <= log2(1 + 1/2) breaks first.
        assert!(!in_capacity_region(&r, &g, 1.0).unwrap());
    }

    #[test]
    fn strong_user_survives_weak_partner() {
        let report = per_user_decodable(&rates(&[1.0, 1.0]), &snrs(&[3.0, 0.5])).unwrap();
        assert_eq!(report.decodable, vec![true, false]);
        assert_eq!(report.max_decodable_set, vec![0]);
    }

    #[test]
    fn infinite_snr_decodes_everyone() {
        let report = per_user_decodable(&rates(&[2.0, 2.0, 2.0]), &snrs(&[1e9, 1e9, 1e9])).unwrap();
        assert_eq!(report.decodable, vec![true, true, true]);
        assert_eq!(report.max_decodable_set, vec![0, 1, 2]);
    }

    #[test]
    fn zero_snr_decodes_no_one() {
        let report = per_user_decodable(&rates(&[0.5, 0.5]), &snrs(&[0.0, 0.0])).unwrap();
        assert_eq!(report.decodable, vec![false, false]);
        assert!(report.max_decodable_set.is_empty());
    }

    #[test]
    fn zero_rate_is_always_decodable() {
        let report = per_user_decodable(&rates(&[0.0, 0.0]), &snrs(&[0.0, 0.0])).unwrap();
        assert_eq!(report.decodable, vec![true, true]);
        assert_eq!(report.max_decodable_set, vec![0, 1]);
    }

    #[test]
    fn prefix_matches_hand_example() {
        let report = symmetric_prefix_decodable(1.0, &snrs(&[3.0, 0.5]));
        assert_eq!(report.decodable, vec![true, false]);
        assert_eq!(report.max_decodable_set, vec![0]);
        // Same draw with the users swapped: membership follows SNR, not index.
        let swapped = symmetric_prefix_decodable(1.0, &snrs(&[0.5, 3.0]));
        assert_eq!(swapped.decodable, vec![false, true]);
        assert_eq!(swapped.max_decodable_set, vec![1]);
    }

    #[test]
    fn equal_snrs_decode_as_a_block() {
        let report = symmetric_prefix_decodable(0.5, &snrs(&[10.0, 10.0, 10.0]));
        assert_eq!(report.decodable, vec![true, true, true]);
        assert_eq!(report.max_decodable_set, vec![0, 1, 2]);
    }

    #[test]
    fn prefix_path_handles_fifty_users() {
        let gains: Vec<f64> = (1..=50).map(|i| i as f64 / 10.0).collect();
        let report = symmetric_prefix_decodable(0.06, &snrs(&gains));
        assert_eq!(report.decodable.len(), 50);
        assert_eq!(
            report.max_decodable_set.len(),
            report.decodable.iter().filter(|d| **d).count()
        );
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let r = rates(&vec![0.1; 26]);
        let g = snrs(&vec![1.0; 26]);
        assert!(matches!(
            in_capacity_region(&r, &g, 0.0),
            Err(Error::SubsetLimitExceeded { j_users: 26, limit: 25 })
        ));
        assert!(matches!(
            per_user_decodable(&r, &g),
            Err(Error::SubsetLimitExceeded { j_users: 26, limit: 25 })
        ));
    }

    #[test]
    fn length_mismatch_is_a_domain_error() {
        let r = rates(&[1.0, 1.0]);
        let g = snrs(&[1.0]);
        assert!(matches!(
            in_capacity_region(&r, &g, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(per_user_decodable(&r, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn vectors_reject_bad_entries() {
        assert!(RateVector::new(vec![]).is_err());
        assert!(RateVector::new(vec![-0.1]).is_err());
        assert!(RateVector::new(vec![f64::NAN]).is_err());
        assert!(SnrVector::new(vec![]).is_err());
        assert!(SnrVector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn sparse_and_dense_subset_sums_agree() {
        // Same accumulation order by construction; spot-check it anyway.
        let values: Vec<f64> = (0..12).map(|i| 0.1 + (i as f64) * 0.37).collect();
        let dense = SubsetSums::build(&values);
        let sparse = SubsetSums::Sparse(&values);
        for mask in 0..(1usize << 12) {
            assert_eq!(dense.sum(mask), sparse.sum(mask), "mask {mask}");
        }
    }

    fn exp1_like(x: f64) -> f64 {
        // Turns a uniform sample into a positive, heavy-enough tail for
        // region stress without depending on the montecarlo module.
        -(1.0 - x).max(1e-12).ln()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rate_monotonicity(
            uniforms in proptest::collection::vec(0.0f64..1.0, 1..=8),
            rate_scale in 0.0f64..2.0,
            shrink in proptest::collection::vec(0.0f64..=1.0, 8),
            noise in 0.0f64..5.0,
        ) {
            let gains: Vec<f64> = uniforms.iter().map(|&u| exp1_like(u) * 3.0).collect();
            let j = gains.len();
            let base: Vec<f64> = (0..j).map(|i| rate_scale * (0.2 + shrink[i.min(7)])).collect();
            let g = SnrVector::new(gains).unwrap();
            let r = RateVector::new(base.clone()).unwrap();
            if in_capacity_region(&r, &g, noise).unwrap() {
                let reduced: Vec<f64> =
                    base.iter().zip(&shrink).map(|(b, s)| b * s).collect();
                let r2 = RateVector::new(reduced).unwrap();
                prop_assert!(in_capacity_region(&r2, &g, noise).unwrap());
            }
        }

        #[test]
        fn power_monotonicity_of_flags(
            uniforms in proptest::collection::vec(0.0f64..1.0, 1..=8),
            r_common in 0.05f64..2.0,
            scale in 1.0f64..100.0,
        ) {
            let gains: Vec<f64> = uniforms.iter().map(|&u| exp1_like(u)).collect();
            let boosted: Vec<f64> = gains.iter().map(|g| g * scale).collect();
            let r = RateVector::symmetric(r_common, gains.len()).unwrap();
            let before = per_user_decodable(&r, &SnrVector::new(gains).unwrap()).unwrap();
            let after = per_user_decodable(&r, &SnrVector::new(boosted).unwrap()).unwrap();
            for (b, a) in before.decodable.iter().zip(&after.decodable) {
                prop_assert!(!b || *a, "raising power must never undecode a user");
            }
        }

        #[test]
        fn prefix_agrees_with_exhaustive(
            uniforms in proptest::collection::vec(0.0f64..1.0, 1..=8),
            r_common in 0.0f64..2.5,
            power in 0.1f64..300.0,
        ) {
            let gains: Vec<f64> = uniforms
                .iter()
                .map(|&u| exp1_like(u) * power / uniforms.len() as f64)
                .collect();
            let g = SnrVector::new(gains).unwrap();
            let r = RateVector::symmetric(r_common, g.len()).unwrap();
            let exhaustive = per_user_decodable(&r, &g).unwrap();
            let prefix = symmetric_prefix_decodable(r_common, &g);
            prop_assert_eq!(exhaustive, prefix);
        }

        #[test]
        fn interference_free_failures_stay_failed(
            uniforms in proptest::collection::vec(0.0f64..1.0, 1..=8),
            r_common in 0.05f64..2.0,
        ) {
            let gains: Vec<f64> = uniforms.iter().map(|&u| exp1_like(u)).collect();
            let g = SnrVector::new(gains.clone()).unwrap();
            let report = symmetric_prefix_decodable(r_common, &g);
            for (k, &gain) in gains.iter().enumerate() {
                if r_common > log2_1p(gain) {
                    prop_assert!(
                        !report.decodable[k],
                        "user {k} fails interference-free but was flagged decodable"
                    );
                }
            }
        }

        #[test]
        fn single_user_reduces_to_threshold_test(
            r in 0.0f64..4.0,
            gain in 0.0f64..20.0,
        ) {
            let report =
                per_user_decodable(&rates(&[r]), &snrs(&[gain])).unwrap();
            prop_assert_eq!(report.decodable[0], r <= log2_1p(gain));
        }

        #[test]
        fn max_set_members_are_flagged(
            uniforms in proptest::collection::vec(0.0f64..1.0, 1..=7),
            r_common in 0.05f64..2.0,
        ) {
            let gains: Vec<f64> = uniforms.iter().map(|&u| exp1_like(u) * 4.0).collect();
            let g = SnrVector::new(gains).unwrap();
            let r = RateVector::symmetric(r_common, g.len()).unwrap();
            let report = per_user_decodable(&r, &g).unwrap();
            for &k in &report.max_decodable_set {
                prop_assert!(report.decodable[k]);
            }
            let flagged = report.decodable.iter().filter(|d| **d).count();
            if flagged == g.len() {
                prop_assert_eq!(report.max_decodable_set.len(), g.len());
            }
        }
    }
}
