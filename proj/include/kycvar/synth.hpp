#pragma once

#include <cstdint>
#include <vector>

#include "kycvar/dataset.hpp"

namespace kycvar {

/// Cohort parameters for the synthetic dealership generator.
///
/// Profiles come from a fixed catalogue in which one-hot Medium has weight
/// `medium_profile_share`. Each account is assigned an under-risked class with
/// probability `under_risked_share`; its portfolio is the profile with a
/// fraction in [drift_min, drift_max] of every bucket's mass moved one bucket
/// down (under) or up (over). The sign of the resulting VaR discrepancy is
/// checked against the model: under-risked portfolios satisfy d <= 0 and
/// over-risked ones d > 0, retrying with a full shift and then falling back to
/// the profile itself (under) or one-hot High (over).
struct SynthSpec {
  std::size_t accounts = 1000;
  std::size_t advisors = 20;
  std::size_t dates = 30;
  Date start{2019, 3, 29};

  double under_risked_share = 0.867;
  double medium_profile_share = 0.7;
  double drift_min = 0.2;
  double drift_max = 0.6;

  double influx_rate = 0.002;      // per account-date, pro-rata deposit of 50..150%
  double rebalance_rate = 0.002;   // per account-date, portfolio redrawn in class
  double kyc_change_rate = 0.01;   // per account, one profile change mid-range
  double daily_volatility = 0.005; // multiplicative market-value noise

  /// Throws DomainError for sizes < 1, shares outside [0, 1], or a drift range
  /// outside [0, 1] or with drift_min > drift_max.
  void validate() const;
};

/// Profile catalogue, fractions. Index 0 is one-hot Medium.
const std::vector<Vec5>& profile_catalogue();

/// Copy of `config` with one bucket's expected return shifted so that the
/// one-hot allocation on that bucket has VaR exactly `target_bps`. Used to pin
/// a cohort's dominant profile VaR.
ModelConfig anchor_bucket_var(const ModelConfig& config, Bucket bucket, double target_bps);

/// Deterministic in (spec, config, seed). Snapshots are in (date, account)
/// order on consecutive weekdays from spec.start, and every row passes strict
/// validation. Portfolios only move on rebalance dates; deposits keep the
/// allocation.
Dataset generate_synthetic(const SynthSpec& spec, const ModelConfig& config, std::uint64_t seed);

}  // namespace kycvar
