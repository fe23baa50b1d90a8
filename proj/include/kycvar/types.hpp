#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace kycvar {

inline constexpr std::size_t kBuckets = 5;

using Vec5 = std::array<double, kBuckets>;
using Mat5 = std::array<Vec5, kBuckets>;

/// Risk buckets in increasing order of risk.
enum class Bucket : std::size_t { low = 0, low_medium, medium, medium_high, high };

inline constexpr std::array<std::string_view, kBuckets> kBucketNames = {
    "Low", "Low-Medium", "Medium", "Medium-High", "High"};

inline constexpr std::size_t index_of(Bucket b) noexcept { return static_cast<std::size_t>(b); }

}  // namespace kycvar
