#pragma once

#include <array>
#include <span>

#include "kycvar/types.hpp"

namespace kycvar {

/// Five ordered bucket weights summing to one.
///
/// Inputs may be given either as fractions (sum near 1) or as percents (sum
/// near 100); the unit is detected from the sum and the weights are normalized.
/// Negative entries and sums matching neither unit are rejected with a
/// SchemaError.
class RiskAllocation {
 public:
  /// Relative tolerance on the input sum. Covers five values written with six
  /// decimals.
  static constexpr double kSumTolerance = 1e-5;

  explicit RiskAllocation(std::span<const double> weights);
  explicit RiskAllocation(const Vec5& weights) : RiskAllocation(std::span<const double>(weights)) {}

  static RiskAllocation one_hot(Bucket bucket);

  const Vec5& weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  Vec5 percents() const noexcept;

  friend bool operator==(const RiskAllocation&, const RiskAllocation&) = default;

 private:
  Vec5 weights_{};
};

/// Weights in millionths that sum to exactly 1000000 (largest remainder).
std::array<long long, kBuckets> to_micro_units(const Vec5& weights);

/// Allocation with weights on the six-decimal grid; a fixed point of writing
/// and re-reading a snapshot file.
RiskAllocation quantize_micro(const RiskAllocation& alloc);

}  // namespace kycvar
