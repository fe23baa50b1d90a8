#include "kycvar/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kycvar/errors.hpp"
#include "kycvar/text.hpp"

namespace kycvar {

RiskAllocation::RiskAllocation(std::span<const double> weights) {
  if (weights.size() != kBuckets) {
    throw SchemaError("allocation needs 5 weights, got " + std::to_string(weights.size()),
                      "allocation");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw SchemaError("allocation weight " + text::shortest(w) + " is negative or not finite",
                        "allocation");
    }
    sum += w;
  }
  const bool fractions = std::abs(sum - 1.0) <= kSumTolerance;
  const bool percents = std::abs(sum - 100.0) <= kSumTolerance * 100.0;
  if (!fractions && !percents) {
    throw SchemaError("allocation sums to " + text::shortest(sum) + ", expected 1 or 100",
                      "allocation");
  }
  for (std::size_t i = 0; i < kBuckets; ++i) weights_[i] = weights[i] / sum;
}

RiskAllocation RiskAllocation::one_hot(Bucket bucket) {
  Vec5 w{};
  w[index_of(bucket)] = 1.0;
  return RiskAllocation(w);
}

Vec5 RiskAllocation::percents() const noexcept {
  Vec5 p{};
  for (std::size_t i = 0; i < kBuckets; ++i) p[i] = weights_[i] * 100.0;
  return p;
}

std::array<long long, kBuckets> to_micro_units(const Vec5& w) {
  std::array<long long, kBuckets> units{};
  std::array<double, kBuckets> rem{};
  long long total = 0;
  for (std::size_t i = 0; i < kBuckets; ++i) {
    const double scaled = w[i] * 1e6;
    units[i] = static_cast<long long>(std::floor(scaled + 1e-9));
    rem[i] = scaled - static_cast<double>(units[i]);
    total += units[i];
  }
  while (total < 1000000) {
    const auto it = std::max_element(rem.begin(), rem.end());
    ++units[static_cast<std::size_t>(it - rem.begin())];
    *it = -1.0;
    ++total;
  }
  while (total > 1000000) {
    --*std::max_element(units.begin(), units.end());
    --total;
  }
  return units;
}

RiskAllocation quantize_micro(const RiskAllocation& alloc) {
  const auto units = to_micro_units(alloc.weights());
  Vec5 w{};
  for (std::size_t i = 0; i < kBuckets; ++i) w[i] = static_cast<double>(units[i]) / 1e6;
  return RiskAllocation(w);
}

}  // namespace kycvar
